#include <doctest.h>

#include <chrono>
#include <cmath>

#include "brisk/asymptotics.hpp"
#include "brisk/errors.hpp"
#include "brisk/gaussian.hpp"
#include "brisk/simulator.hpp"
#include "brisk/trend.hpp"
#include "test_util.hpp"

using namespace brisk;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

const CovarianceModel kId1 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(1, 1));
const CovarianceModel kId2 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(2, 2));

RuinScenario oned(double u, double c, int n_steps, std::int64_t n_paths, std::uint64_t seed) {
  return RuinScenario{kId1, vec1(1.0), TrendDistribution::point_mass(vec1(c)),
                      1.0, u, n_steps, n_paths, seed};
}

}  // namespace

TEST_CASE("driftless 1-D matches the reflection principle") {
  const auto est = simulate_ruin(oned(1.0, 0.0, 2048, 200000, 101));
  const double exact = 2 * univariate_phi(-1.0);
  CHECK(est.point <= exact + 3 * est.std_error);
  CHECK(est.point >= exact - 3 * est.std_error - 0.01);  // one-sided grid bias
}

TEST_CASE("drifted 1-D matches the exact oracle") {
  const auto est = simulate_ruin(oned(1.0, 1.0, 4096, 200000, 102));
  const double exact = exact_ruin_1d(1.0, 1.0, 1.0, 1.0);
  CHECK(exact == doctest::Approx(0.090418).epsilon(1e-4));
  CHECK(est.point <= exact + 3 * est.std_error);
  CHECK(est.point >= exact - 3 * est.std_error - 0.006);
}

TEST_CASE("vanishing level makes simultaneous ruin near-certain") {
  // Planar Brownian motion enters the positive quadrant immediately, so
  // the continuous-time probability at u = 0.01 is close to 1. Grid
  // monitoring only sees part of it (the entries live on time scales of
  // order u^2); the estimate climbs with refinement toward a plateau
  // around 0.94, measured at 2^18 steps.
  double prev = 0.0;
  for (int steps : {512, 4096, 16384}) {
    RuinScenario s{kId2, vec2(1.0, 1.0), TrendDistribution::point_mass(Eigen::VectorXd::Zero(2)),
                   1.0, 0.01, steps, 20000, 103};
    const double est = simulate_ruin(s).point;
    CHECK(est > prev);
    prev = est;
  }
  CHECK(prev > 0.9);
  RuinScenario s{kId2, vec2(1.0, 1.0), TrendDistribution::point_mass(Eigen::VectorXd::Zero(2)),
                 1.0, 0.0, 512, 20000, 103};
  CHECK_THROWS_AS(simulate_ruin(s), InvalidScenario);
}

TEST_CASE("identical master seed gives identical estimates") {
  const auto a = simulate_ruin(oned(1.0, 0.5, 512, 50000, 104));
  const auto b = simulate_ruin(oned(1.0, 0.5, 512, 50000, 104));
  CHECK(a.point == b.point);
  const auto c = simulate_ruin(oned(1.0, 0.5, 512, 50000, 105));
  CHECK(a.point != c.point);
}

TEST_CASE("split estimates sandwich the full-window estimate path by path") {
  for (double rho : {0.0, 0.5}) {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1, rho, rho, 1;
    RuinScenario s{CovarianceModel::from_covariance(sigma), vec2(1.0, 0.8),
                   TrendDistribution::point_mass(Eigen::VectorXd::Zero(2)),
                   1.0, 3.0, 512, 200000, 106};
    const auto psi = simulate_ruin(s);
    const auto [m_est, big_m] = simulate_split(s, 4.0);
    // counts are integers; the sandwich holds exactly on shared paths
    const auto count = [&](const EstimateWithCI& e) {
      return std::llround(e.point * double(s.n_paths));
    };
    CHECK(count(m_est) <= count(psi));
    CHECK(count(psi) <= count(m_est) + count(big_m));
  }
}

TEST_CASE("degenerate split: delta -> 0 moves all mass to the late window") {
  RuinScenario s = oned(2.0, 0.0, 512, 100000, 107);
  const auto psi = simulate_ruin(s);
  const auto [m_est, big_m] = simulate_split(s, 3.999);  // delta = 1 - 3.999/4
  CHECK(big_m.point == doctest::Approx(psi.point).epsilon(0.02));
  CHECK(m_est.point < 0.05);
}

TEST_CASE("early-window mass decreases in Lambda") {
  RuinScenario s = oned(3.0, 0.0, 512, 400000, 108);
  const auto [m4, M4] = simulate_split(s, 4.0);
  const auto [m8, M8] = simulate_split(s, 8.0);
  const double combined = std::hypot(m4.std_error, m8.std_error);
  CHECK(m8.point <= m4.point + 2 * combined);
}

TEST_CASE("split horizon validation") {
  RuinScenario s = oned(2.0, 0.0, 512, 1000, 109);
  CHECK_THROWS_AS(simulate_split(s, 4.0), HorizonTooLarge);   // Lambda == u^2
  CHECK_THROWS_AS(simulate_split(s, 5.0), HorizonTooLarge);
  s.horizon = 2.0;
  CHECK_THROWS_AS(simulate_split(s, 1.0), InvalidScenario);   // T != 1
}

TEST_CASE("estimates are monotone in the level under a shared seed") {
  double prev = 1.0;
  for (double u : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const auto est = simulate_ruin(oned(u, 0.0, 256, 50000, 110));
    CHECK(est.point <= prev);  // exact: same paths, nested events
    prev = est.point;
  }
}

TEST_CASE("convergence sweep is exactly monotone and approaches the target") {
  RuinScenario s = oned(1.0, 0.0, 64, 200000, 111);
  const auto rows = convergence_sweep(s, {256, 1024, 4096, 16384});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].estimate >= rows[i - 1].estimate);  // subsampled grids nest
  }
  const double target = 2 * univariate_phi(-1.0);
  CHECK(rows.back().estimate <= target + 3 * rows.back().std_error);
  CHECK(rows.back().estimate >= target - 3 * rows.back().std_error - 0.004);
}

TEST_CASE("sweep schedule validation") {
  RuinScenario s = oned(1.0, 0.0, 64, 1000, 112);
  CHECK_THROWS_AS(convergence_sweep(s, {256, 1024}), ScheduleInvalid);
  CHECK_THROWS_AS(convergence_sweep(s, {256, 128, 512}), ScheduleInvalid);
  CHECK_THROWS_AS(convergence_sweep(s, {100, 200, 300}), ScheduleInvalid);  // 200 !| 300
}

TEST_CASE("trend draws are independent of the path driver streams") {
  // Domain separation: the simulator derives trend and path streams from
  // the same master seed but distinct tags; their outputs decorrelate.
  const auto trend = TrendDistribution::bernoulli(vec2(0.5, 0.5));
  const int n = 100000;
  const auto etas = trend.sample(n, 900);
  const auto terminals = sample(kId2, n, 900);
  for (int j = 0; j < 2; ++j) {
    const double eta_mean = etas.col(j).mean();
    const double w_mean = terminals.col(j).mean();
    double cov = 0.0, var_e = 0.0, var_w = 0.0;
    for (int r = 0; r < n; ++r) {
      const double de = etas(r, j) - eta_mean;
      const double dw = terminals(r, j) - w_mean;
      cov += de * dw;
      var_e += de * de;
      var_w += dw * dw;
    }
    const double corr = cov / std::sqrt(var_e * var_w);
    CHECK(std::abs(corr) < 0.01);
  }
}

TEST_CASE("runtime scales roughly linearly in the grid resolution") {
  const auto time_run = [](int n_steps) {
    RuinScenario s{kId1, vec1(1.0), TrendDistribution::point_mass(vec1(0.0)),
                   1.0, 6.0, n_steps, 40000, 113};  // u=6: no early exits
    const auto t0 = std::chrono::steady_clock::now();
    simulate_ruin(s);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  time_run(4096);  // warm up
  std::vector<double> ratios;
  for (int rep = 0; rep < 3; ++rep) {
    const double base = time_run(4096);
    const double doubled = time_run(8192);
    ratios.push_back(doubled / base);
  }
  std::sort(ratios.begin(), ratios.end());
  CHECK(ratios[1] >= 1.6);  // median of three
  CHECK(ratios[1] <= 2.6);
}
