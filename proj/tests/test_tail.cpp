#include <doctest.h>

#include <cmath>
#include <random>

#include "brisk/errors.hpp"
#include "brisk/gaussian.hpp"
#include "brisk/tail.hpp"
#include "test_util.hpp"

using namespace brisk;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
const CovarianceModel kId2 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(2, 2));
}  // namespace

TEST_CASE("orthant probability at the origin") {
  const auto est = tail_probability(kId2, Eigen::VectorXd::Zero(2), 200000, 11);
  CHECK(est.meta.substr(0, 8) == "plain-mc");
  CHECK(std::abs(est.point - 0.25) <= 3 * est.std_error);
  // binomial stderr contract
  CHECK(est.std_error ==
        doctest::Approx(std::sqrt(est.point * (1 - est.point) / est.n)).epsilon(1e-12));
}

TEST_CASE("moderate barrier via plain Monte Carlo") {
  const auto est = tail_probability(kId2, vec2(1, 1), 400000, 12);
  const double expected = univariate_phibar(1.0) * univariate_phibar(1.0);
  CHECK(est.meta.substr(0, 8) == "plain-mc");
  CHECK(std::abs(est.point - expected) <= 3 * est.std_error);
}

TEST_CASE("deep barrier needs tilting and achieves small relative error") {
  const auto est = tail_probability(kId2, vec2(4, 4), 100000, 13);
  const double expected = univariate_phibar(4.0) * univariate_phibar(4.0);
  CHECK(est.meta.substr(0, 6) == "tilted");
  CHECK(est.std_error / est.point < 0.05);
  CHECK(std::abs(est.point - expected) <= 3 * est.std_error);
}

TEST_CASE("tilted and plain agree on mid-range barriers") {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd b(2);
    b[0] = 0.5 + 1.5 * std::generate_canonical<double, 53>(gen);
    b[1] = 0.5 + 1.5 * std::generate_canonical<double, 53>(gen);
    const auto plain =
        tail_probability(kId2, b, 400000, 1000 + trial, TailStrategy::plain);
    const auto tilted =
        tail_probability(kId2, b, 400000, 2000 + trial, TailStrategy::tilted);
    const double gap = std::abs(plain.point - tilted.point);
    const double combined = std::hypot(plain.std_error, tilted.std_error);
    CHECK(gap <= 3 * combined);
  }
}

TEST_CASE("diagonal covariance factorizes into univariate tails") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
  diag.diagonal() << 1.0, 4.0, 0.25;
  const auto model = CovarianceModel::from_covariance(diag);
  Eigen::VectorXd b(3);
  b << 0.5, 1.0, 0.2;
  const auto est = tail_probability(model, b, 400000, 15);
  const double expected = univariate_phibar(0.5) * univariate_phibar(1.0 / 2.0) *
                          univariate_phibar(0.2 / 0.5);
  CHECK(std::abs(est.point - expected) <= 3 * est.std_error);
}

TEST_CASE("correlated tilted tail against a conditional-slice reference") {
  // P(W1 > 6, W2 > 1.8) at rho = 0.5, checked against 1-D quadrature of
  // Phi-bar((b2 - rho x)/sqrt(1-rho^2)) phi(x) over x > 6.
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1, 0.5, 0.5, 1;
  const auto model = CovarianceModel::from_covariance(sigma);
  const auto est = tail_probability(model, vec2(6.0, 1.8), 400000, 16);
  const double h = 1e-4;
  double reference = 0.0;
  for (double x = 6.0 + h / 2; x < 12.0; x += h) {
    const double cond = univariate_phibar((1.8 - 0.5 * x) / std::sqrt(0.75));
    reference += cond * std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI) * h;
  }
  CHECK(est.meta.substr(0, 6) == "tilted");
  CHECK(std::abs(est.point - reference) <= 3 * est.std_error + 1e-3 * reference);
}

TEST_CASE("nonpositive barrier falls back to plain Monte Carlo when tilt is forced") {
  const auto est =
      tail_probability(kId2, vec2(-0.5, -0.5), 50000, 17, TailStrategy::tilted);
  CHECK(est.meta.find("fallback=nonpositive-barrier") != std::string::npos);
  const double expected = univariate_phibar(-0.5) * univariate_phibar(-0.5);
  CHECK(std::abs(est.point - expected) <= 3 * est.std_error);
}

TEST_CASE("point-mass-at-zero trend reproduces tail_probability exactly") {
  const auto trend = TrendDistribution::point_mass(Eigen::VectorXd::Zero(2));
  for (const auto& b : {vec2(1, 1), vec2(4, 4)}) {
    const auto direct = tail_probability(kId2, b, 50000, 18);
    const auto averaged = tail_term(kId2, b, trend, 50000, 256, 18);
    CHECK(direct.point == averaged.point);  // same engine, same stream
    CHECK(direct.std_error == averaged.std_error);
  }
}

TEST_CASE("bernoulli trend tail term approaches the product factor") {
  const auto trend = TrendDistribution::bernoulli(vec2(0.5, 0.5));
  const double u = 5.0;
  const auto with_trend = tail_term(kId2, vec2(u, u), trend, 400000, 256, 19);
  const auto without = tail_probability(kId2, vec2(u, u), 400000, 19);
  const double ratio = with_trend.point / without.point;
  // (1-p1)(1-p2) = 0.25 with a small positive correction from the k != 0 atoms
  CHECK(ratio == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("uniform-box trend uses eta Monte Carlo and matches quadrature") {
  const auto trend = TrendDistribution::uniform_box(vec2(0, 0), vec2(1, 1));
  const double u = 5.0;
  const auto est = tail_term(kId2, vec2(u, u), trend, 200000, 2048, 20);
  CHECK(est.meta.find("eta-mc") != std::string::npos);
  // independent reference: product of 1-D integrals int_0^1 phibar(u+c) dc
  const double h = 1e-4;
  double one_dim = 0.0;
  for (double c = h / 2; c < 1.0; c += h) one_dim += univariate_phibar(u + c) * h;
  const double reference = one_dim * one_dim;
  CHECK(std::abs(est.point - reference) <= 4 * est.std_error + 0.01 * reference);
}

TEST_CASE("budget validation") {
  CHECK_THROWS_AS(tail_probability(kId2, vec2(1, 1), 999, 1), DomainError);
}
