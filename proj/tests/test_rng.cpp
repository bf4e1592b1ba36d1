#include <doctest.h>

#include <cmath>
#include <vector>

#include "brisk/rng.hpp"

using namespace brisk;

TEST_CASE("philox streams are reproducible and chunk-disjoint") {
  rng::Stream a(42, rng::StreamTag::sim_path, 0);
  rng::Stream b(42, rng::StreamTag::sim_path, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  rng::Stream c(42, rng::StreamTag::sim_path, 1);
  rng::Stream d(42, rng::StreamTag::sim_trend, 0);
  int equal_chunk = 0, equal_tag = 0;
  rng::Stream a2(42, rng::StreamTag::sim_path, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a2.next_u64();
    if (x == c.next_u64()) ++equal_chunk;
    if (x == d.next_u64()) ++equal_tag;
  }
  CHECK(equal_chunk == 0);
  CHECK(equal_tag == 0);
}

TEST_CASE("uniforms stay inside the open unit interval") {
  rng::Stream s(7, rng::StreamTag::trend_draw, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_double();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal source moments") {
  rng::NormalSource normals(2024, rng::StreamTag::gaussian_sample, 0);
  const int n = 1 << 20;
  double sum = 0.0, sum_sq = 0.0, sum_cube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = normals();
    sum += z;
    sum_sq += z * z;
    sum_cube += z * z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 6.0 / std::sqrt(double(n)));
  CHECK(std::abs(sum_cube / n) < 10.0 / std::sqrt(double(n)));
}

TEST_CASE("bulk fill matches one-at-a-time draws") {
  rng::NormalSource a(5, rng::StreamTag::ia_path, 9);
  rng::NormalSource b(5, rng::StreamTag::ia_path, 9);
  std::vector<double> bulk(777);
  a.fill(bulk);
  for (double x : bulk) CHECK(x == b());
}

TEST_CASE("parallel_chunks covers every chunk exactly once") {
  const std::uint64_t n = 1000;
  std::vector<int> visits(n, 0);
  rng::parallel_chunks(n, [&](std::uint64_t c) { visits[c]++; });
  for (std::uint64_t c = 0; c < n; ++c) CHECK(visits[c] == 1);
}
