#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace brisk::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Domain-separation tags. Every stochastic operation owns a tag, so
// e.g. trend draws and Brownian increments never share a stream.
enum class StreamTag : std::uint64_t {
  gaussian_sample = 0x11,
  tail_normals = 0x12,
  tail_eta = 0x13,
  trend_draw = 0x14,
  sim_path = 0x15,
  sim_trend = 0x16,
  ia_path = 0x17,
  quad_path = 0x18,
  orthant_mc = 0x19,
};

// Counter-based Philox4x32-10 stream. The key is derived from
// (master_seed, tag); the chunk index selects a disjoint 2^64-block
// plane of the 128-bit counter, so chunks are independent streams and
// results do not depend on which worker runs which chunk.
class Stream {
 public:
  Stream(std::uint64_t master_seed, StreamTag tag, std::uint64_t chunk) {
    const std::uint64_t key = splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
    key0_ = static_cast<std::uint32_t>(key);
    key1_ = static_cast<std::uint32_t>(key >> 32);
    chunk_ = chunk;
  }

  std::uint32_t next_u32() {
    if (pos_ == 4) fill_block();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform in the open interval (0, 1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Fills `out` (even size) with two uniforms per counter block; used by
  // the batched normal transform.
  void fill_uniforms(std::span<double> out);

 private:
  void fill_block();

  std::uint32_t key0_ = 0, key1_ = 0;
  std::uint64_t chunk_ = 0;
  std::uint64_t block_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int pos_ = 4;
};

// Buffered N(0,1) source on top of a Stream. The heavy transform runs
// in a batch kernel, so draws are cheap; consumption order within a
// chunk is part of the reproducibility contract.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t master_seed, StreamTag tag, std::uint64_t chunk,
                        std::size_t buffer_size = 8192);

  double operator()() {
    if (pos_ == z_.size()) refill();
    return z_[pos_++];
  }

  // Bulk copy out of the internal buffer; refills in batches.
  void fill(std::span<double> out);

 private:
  void refill();

  Stream stream_;
  std::vector<double> u_, z_, scratch_;
  std::size_t pos_;
};

// Number of worker threads: BRISK_THREADS env var, 0 or unset = auto.
int thread_count();

// Runs fn(chunk) for chunk in [0, n_chunks) on thread_count() workers.
// Chunks are claimed from an atomic counter; fn must write results into
// per-chunk slots so the reduction order stays fixed.
void parallel_chunks(std::uint64_t n_chunks, const std::function<void(std::uint64_t)>& fn);

}  // namespace brisk::rng
