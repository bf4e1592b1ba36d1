#include <doctest.h>

#include <cmath>

#include "brisk/asymptotics.hpp"
#include "brisk/errors.hpp"
#include "brisk/gaussian.hpp"
#include "test_util.hpp"

using namespace brisk;

TEST_CASE("exact 1-D ruin probability examples") {
  CHECK(exact_ruin_1d(0.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(exact_ruin_1d(1.0, 0.0, 1.0, 1.0) ==
        doctest::Approx(2 * univariate_phi(-1.0)).epsilon(1e-13));
  CHECK(exact_ruin_1d(1.0, 0.0, 1.0, 1.0) == doctest::Approx(0.31731).epsilon(1e-4));
  CHECK(exact_ruin_1d(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.090418).epsilon(1e-5));
}

TEST_CASE("reflection principle identity for zero drift") {
  for (double u = 0.0; u <= 6.0; u += 0.173) {
    CHECK(test::close_rel(exact_ruin_1d(u, 0.0, 1.0, 1.0), 2 * univariate_phi(-u), 1e-12));
  }
}

TEST_CASE("monotonicity and range over a parameter grid") {
  const int n = 10;
  std::vector<double> us, cs, sigmas, ts;
  for (int i = 0; i < n; ++i) {
    us.push_back(5.0 * i / (n - 1));
    cs.push_back(-2.0 + 4.0 * i / (n - 1));
    sigmas.push_back(0.5 + 1.5 * i / (n - 1));
    ts.push_back(0.5 + 3.5 * i / (n - 1));
  }
  for (double sigma : sigmas) {
    for (double t : ts) {
      for (double c : cs) {
        double prev_u = 2.0;
        for (double u : us) {
          const double val = exact_ruin_1d(u, c, sigma, t);
          CHECK(val >= 0.0);
          CHECK(val <= 1.0);
          CHECK(val <= prev_u + 1e-12);  // non-increasing in u
          prev_u = val;
        }
      }
      for (double u : us) {
        double prev_c = 2.0;
        for (double c : cs) {
          const double val = exact_ruin_1d(u, c, sigma, t);
          CHECK(val <= prev_c + 1e-12);  // non-increasing in c
          prev_c = val;
        }
        double prev_t = -1.0;
        for (double tt : ts) {
          const double val = exact_ruin_1d(u, 1.0, sigma, tt);
          CHECK(val >= prev_t - 1e-12);  // non-decreasing in T
          prev_t = val;
        }
      }
    }
  }
}

TEST_CASE("deep-tail evaluation stays accurate near the range floor") {
  // Both terms sit near e^{-516}; the log-space product must agree with
  // the Mills-ratio asymptotics instead of losing digits to subnormals.
  const double val = exact_ruin_1d(30.0, 2.0, 1.0, 1.0);
  CHECK(val > 0.0);
  const double log_t1 = -0.5 * 32.0 * 32.0 - std::log(32.0 * std::sqrt(2 * M_PI));
  const double log_t2 = -120.0 - 0.5 * 28.0 * 28.0 - std::log(28.0 * std::sqrt(2 * M_PI));
  const double reference = std::exp(log_t1) + std::exp(log_t2);
  CHECK(val == doctest::Approx(reference).epsilon(5e-3));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(exact_ruin_1d(1.0, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(exact_ruin_1d(1.0, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(exact_ruin_1d(-0.1, 0.0, 1.0, 1.0), DomainError);
}
