#include "brisk/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

// Box-Muller batch kernel, compiled in its own translation unit with
// -ffast-math so log/sin/cos vectorize through libmvec.
extern "C" void brisk_bm_batch(const double* u, double* z, double* r_scratch, long half);

namespace brisk::rng {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

}  // namespace

void Stream::fill_block() {
  std::uint32_t c0 = static_cast<std::uint32_t>(block_);
  std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(chunk_);
  std::uint32_t c3 = static_cast<std::uint32_t>(chunk_ >> 32);
  std::uint32_t k0 = key0_, k1 = key1_;
  for (int r = 0; r < 10; ++r) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, c0, lo0, hi0);
    mulhilo(kPhiloxM1, c2, lo1, hi1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  buf_[0] = c0;
  buf_[1] = c1;
  buf_[2] = c2;
  buf_[3] = c3;
  ++block_;
  pos_ = 0;
}

void Stream::fill_uniforms(std::span<double> out) {
  std::size_t i = 0;
  const std::size_t n = out.size() & ~std::size_t{1};
  for (; i < n; i += 2) {
    fill_block();
    const std::uint64_t x0 = (static_cast<std::uint64_t>(buf_[1]) << 32) | buf_[0];
    const std::uint64_t x1 = (static_cast<std::uint64_t>(buf_[3]) << 32) | buf_[2];
    out[i] = (static_cast<double>(x0 >> 11) + 0.5) * 0x1.0p-53;
    out[i + 1] = (static_cast<double>(x1 >> 11) + 0.5) * 0x1.0p-53;
    pos_ = 4;
  }
  if (i < out.size()) out[i] = next_double();
}

NormalSource::NormalSource(std::uint64_t master_seed, StreamTag tag, std::uint64_t chunk,
                           std::size_t buffer_size)
    : stream_(master_seed, tag, chunk) {
  const std::size_t size = std::max<std::size_t>(2, (buffer_size + 1) & ~std::size_t{1});
  u_.resize(size);
  z_.resize(size);
  scratch_.resize(size / 2);
  pos_ = size;
}

void NormalSource::refill() {
  stream_.fill_uniforms(u_);
  brisk_bm_batch(u_.data(), z_.data(), scratch_.data(), static_cast<long>(z_.size() / 2));
  pos_ = 0;
}

void NormalSource::fill(std::span<double> out) {
  std::size_t off = 0;
  while (off < out.size()) {
    if (pos_ == z_.size()) refill();
    const std::size_t take = std::min(out.size() - off, z_.size() - pos_);
    std::copy_n(z_.data() + pos_, take, out.data() + off);
    pos_ += take;
    off += take;
  }
}

int thread_count() {
  static const int n = [] {
    if (const char* env = std::getenv("BRISK_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return n;
}

void parallel_chunks(std::uint64_t n_chunks, const std::function<void(std::uint64_t)>& fn) {
  const int workers = static_cast<int>(std::min<std::uint64_t>(n_chunks, static_cast<std::uint64_t>(thread_count())));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace brisk::rng
