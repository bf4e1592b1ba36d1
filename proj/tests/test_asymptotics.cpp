#include <doctest.h>

#include <cmath>
#include <numbers>

#include "brisk/asymptotics.hpp"
#include "brisk/errors.hpp"
#include "brisk/gaussian.hpp"
#include "brisk/simulator.hpp"
#include "test_util.hpp"

using namespace brisk;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

const CovarianceModel kId1 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(1, 1));
const CovarianceModel kId2 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(2, 2));

CovarianceModel rho_model(double rho) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1, rho, rho, 1;
  return CovarianceModel::from_covariance(sigma);
}

}  // namespace

TEST_CASE("ia at horizon zero is exactly the product of 1/lambda") {
  const auto qp = solve_qp(kId1, Eigen::VectorXd::Ones(1));
  const auto est = estimate_ia(qp, kId1, 0.0, 1024, 1000, 3);
  CHECK(est.point == 1.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("single-index ia approaches the closed-form value 2") {
  // P(sup_t (W(t) - t) > x) = e^{-2x} gives I_a = 2 for a = lambda = 1.
  const auto qp = solve_qp(kId1, Eigen::VectorXd::Ones(1));
  const auto est = estimate_ia(qp, kId1, 20.0, 2048, 20000, 5);
  CHECK(est.point > 2.0 - 0.05 - 3 * est.std_error);  // downward discretization bias
  CHECK(est.point < 2.0 + 3 * est.std_error);
}

TEST_CASE("ia profile shares paths and is monotone in the horizon exactly") {
  const auto qp = solve_qp(kId2, Eigen::VectorXd::Ones(2));
  const auto profile = estimate_ia_profile(qp, kId2, {5.0, 10.0, 20.0}, 512, 2000, 7);
  REQUIRE(profile.size() == 3);
  CHECK(profile[0].point <= profile[1].point);
  CHECK(profile[1].point <= profile[2].point);
}

TEST_CASE("ia horizon extension stops once the increment stalls") {
  const auto qp = solve_qp(kId1, Eigen::VectorXd::Ones(1));
  const auto est = estimate_ia_extended(qp, kId1, 5.0, 512, 4000, 9);
  CHECK(est.meta.find("chosen horizon=") != std::string::npos);
  // 1-D closed form is 2; the stall point must already be close
  CHECK(est.point == doctest::Approx(2.0).epsilon(0.1));
  // extending never shrinks the shared-path estimate
  const auto base = estimate_ia(qp, kId1, 5.0, 512, 4000, 9);
  CHECK(est.point >= base.point);
}

TEST_CASE("ia rejects more than three active coordinates") {
  const auto id4 = CovarianceModel::from_mixing(Eigen::MatrixXd::Identity(4, 4));
  const auto qp = solve_qp(id4, Eigen::VectorXd::Ones(4));
  CHECK_THROWS_AS(estimate_ia(qp, id4, 5.0, 512, 1000, 1), DimensionTooLarge);
}

TEST_CASE("quadrature fallback agrees with the pathwise estimator") {
  SUBCASE("|I| = 1") {
    const auto qp = solve_qp(kId1, Eigen::VectorXd::Ones(1));
    const auto pathwise = estimate_ia(qp, kId1, 10.0, 1024, 20000, 21);
    QuadratureOptions options;
    options.grid = 64;
    options.inner_paths = 4000;
    options.steps_per_unit = 1024;
    const auto quad = estimate_ia_quadrature(qp, kId1, 10.0, options, 22);
    const double combined = std::hypot(pathwise.std_error, quad.std_error);
    CHECK(std::abs(pathwise.point - quad.point) <= 3 * combined + 0.02 * pathwise.point);
  }
  SUBCASE("|I| = 2 identity") {
    const auto qp = solve_qp(kId2, Eigen::VectorXd::Ones(2));
    const auto pathwise = estimate_ia(qp, kId2, 6.0, 512, 10000, 23);
    QuadratureOptions options;
    options.grid = 48;
    options.inner_paths = 3000;
    options.steps_per_unit = 512;
    const auto quad = estimate_ia_quadrature(qp, kId2, 6.0, options, 24);
    const double combined = std::hypot(pathwise.std_error, quad.std_error);
    CHECK(std::abs(pathwise.point - quad.point) <= 3 * combined + 0.03 * pathwise.point);
  }
}

TEST_CASE("quadrature budget cap") {
  const auto qp = solve_qp(kId2, Eigen::VectorXd::Ones(2));
  QuadratureOptions options;
  options.grid = 1000000;
  CHECK_THROWS_AS(estimate_ia_quadrature(qp, kId2, 5.0, options, 1), BudgetTooSmall);
}

TEST_CASE("quadrature truncation audit is emitted") {
  const auto qp = solve_qp(kId1, Eigen::VectorXd::Ones(1));
  QuadratureOptions options;
  options.grid = 32;
  options.inner_paths = 2000;
  const auto est = estimate_ia_quadrature(qp, kId1, 5.0, options, 2);
  CHECK(est.meta.find("audit=") != std::string::npos);
  const double audit = std::stod(est.meta.substr(est.meta.find("audit=") + 6));
  CHECK(audit < 1e-6);
}

TEST_CASE("asymptotic assembly identity and corollary case") {
  // rho = 0.5, a = (1, 0.3): I = {1}, lambda_1 = 1, I_a -> 2, so
  // psi ~ 2 P(W(1) > (u, 0.3u)).
  RuinScenario scenario{rho_model(0.5), vec2(1.0, 0.3),
                        TrendDistribution::point_mass(Eigen::VectorXd::Zero(2)),
                        1.0, 4.0, 512, 1000, 31};
  const auto result = asymptotic_psi(scenario, 20.0, {.ia_paths = 20000, .ia_steps = 2048,
                                                      .tail_budget = 200000, .n_eta = 256},
                                     31);
  CHECK(result.qp.active_set == std::vector<int>{0});
  CHECK(result.lambda_product == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.ia.point == doctest::Approx(2.0).epsilon(0.05));
  CHECK(test::close_rel(result.psi.point,
                        result.lambda_product * result.ia.point * result.tail.point, 1e-12));

  const auto tail = tail_probability(scenario.model, vec2(4.0, 1.2), 200000, 31);
  CHECK(result.tail.point == tail.point);  // point mass at zero: same estimator
}

TEST_CASE("self-similarity rescaling for T != 1") {
  // psi_T(au) with a/sqrt(T) and eta*sqrt(T) must match the T=1 evaluation.
  RuinScenario scaled{kId2, vec2(1.0, 1.0),
                      TrendDistribution::point_mass(vec2(0.5, 0.5)), 4.0, 3.0, 512, 1000, 77};
  RuinScenario unit{kId2, vec2(0.5, 0.5), TrendDistribution::point_mass(vec2(1.0, 1.0)),
                    1.0, 3.0, 512, 1000, 77};
  const AsymptoticBudgets budgets{.ia_paths = 5000, .ia_steps = 1024, .tail_budget = 100000,
                                  .n_eta = 16};
  const auto a = asymptotic_psi(scaled, 10.0, budgets, 77);
  const auto b = asymptotic_psi(unit, 10.0, budgets, 77);
  CHECK(a.psi.point == b.psi.point);  // identical after internal rescaling
  CHECK(a.rescale_note.find("rescaled") != std::string::npos);
}

TEST_CASE("bernoulli trend reduces the tail by the product factor") {
  RuinScenario scenario{kId2, vec2(1.0, 1.0), TrendDistribution::bernoulli(vec2(0.5, 0.5)),
                        1.0, 5.0, 512, 1000, 41};
  const AsymptoticBudgets budgets{.ia_paths = 2000, .ia_steps = 1024, .tail_budget = 400000,
                                  .n_eta = 256};
  const auto with_trend = asymptotic_psi(scenario, 10.0, budgets, 41);
  const auto zero_tail = tail_probability(kId2, vec2(5.0, 5.0), 400000, 41);
  CHECK(with_trend.tail.point / zero_tail.point == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("uniform tail expansion examples") {
  SUBCASE("identity, full active set, c = 0, u = 3") {
    const auto qp = solve_qp(kId2, vec2(1.0, 1.0));
    const double value = uniform_tail_expansion(kId2, qp, 3.0, Eigen::VectorXd::Zero(2));
    const double phi9 = std::exp(-9.0) / (2 * std::numbers::pi);
    CHECK(value == doctest::Approx(phi9 / 9.0).epsilon(1e-12));
    CHECK(value == doctest::Approx(2.1819e-6).epsilon(1e-3));
    const double exact = std::pow(univariate_phibar(3.0), 2);
    CHECK(value / exact == doctest::Approx(1.197).epsilon(1e-3));
  }
  SUBCASE("J empty means no correction integral") {
    const auto qp = solve_qp(kId2, vec2(0.8, 0.6));
    const double direct = uniform_tail_expansion(kId2, qp, 5.0, Eigen::VectorXd::Zero(2));
    const double manual = std::exp(log_density(kId2, vec2(4.0, 3.0))) / (25.0 * 0.8 * 0.6);
    CHECK(test::close_rel(direct, manual, 1e-12));
  }
  SUBCASE("partial active set with Gaussian correction vs Monte Carlo") {
    const auto model = rho_model(0.5);
    const auto qp = solve_qp(model, vec2(1.0, 0.3));
    CHECK(qp.complement == std::vector<int>{1});
    CHECK(qp.weak_set.empty());
    const double expansion = uniform_tail_expansion(model, qp, 6.0, Eigen::VectorXd::Zero(2));
    const auto mc = tail_probability(model, vec2(6.0, 1.8), 1000000, 51);
    CHECK(expansion / mc.point > 0.85);
    CHECK(expansion / mc.point < 1.15);
  }
  SUBCASE("weakly active coordinate contributes a half-space factor") {
    // a = (1, rho) puts the second coordinate on the boundary: U = {2}
    // and c = 0 makes the orthant factor exactly 1/2.
    const auto model = rho_model(0.5);
    const auto qp = solve_qp(model, vec2(1.0, 0.5));
    CHECK(qp.weak_set == std::vector<int>{1});
    const double with_u = uniform_tail_expansion(model, qp, 8.0, Eigen::VectorXd::Zero(2));
    // rebuild without the sign constraint by nulling U via a barrier nudge
    const auto qp_free = solve_qp(model, vec2(1.0, 0.49));
    CHECK(qp_free.weak_set.empty());
    const double without_u = uniform_tail_expansion(model, qp_free, 8.0,
                                                    Eigen::VectorXd::Zero(2));
    // a_tilde and lambda coincide for both barriers, so the expansions
    // differ exactly by the half-space factor
    CHECK(with_u / without_u == doctest::Approx(0.5).epsilon(1e-10));
  }
  CHECK_THROWS_AS(uniform_tail_expansion(kId2, solve_qp(kId2, vec2(1, 1)), 0.0,
                                         Eigen::VectorXd::Zero(2)),
                  DomainError);
}

TEST_CASE("upper bound constant examples") {
  SUBCASE("zero upper bound gives the orthant constant 4") {
    const auto trend = TrendDistribution::point_mass(Eigen::VectorXd::Zero(2));
    const auto est = upper_bound_constant(kId2, trend, 1.0, 400000, 61);
    CHECK(std::abs(est.point - 4.0) <= 3 * est.std_error);
  }
  SUBCASE("unit upper bound") {
    const auto trend = TrendDistribution::point_mass(vec2(1.0, 1.0));
    const auto est = upper_bound_constant(kId2, trend, 1.0, 400000, 62);
    const double expected = 1.0 / std::pow(univariate_phibar(1.0), 2);
    CHECK(est.point == doctest::Approx(expected).epsilon(0.03));
    CHECK(est.meta.find("raw K2T") != std::string::npos);
  }
  SUBCASE("negative bound clamps to zero") {
    Eigen::VectorXd minus_one(1);
    minus_one << -1.0;
    const auto trend = TrendDistribution::point_mass(minus_one);
    const auto est = upper_bound_constant(kId1, trend, 1.0, 200000, 63);
    CHECK(est.point == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("uncertifiable constants are rejected") {
    const auto trend = TrendDistribution::point_mass(vec2(9.0, 9.0));
    CHECK_THROWS_AS(upper_bound_constant(kId2, trend, 1.0, 100000, 64), DegenerateBound);
  }
}

TEST_CASE("trend reduction factors") {
  CHECK(bernoulli_asymptotic_factor(vec2(0.5, 0.5)) == 0.25);
  CHECK(bernoulli_asymptotic_factor(Eigen::VectorXd::Zero(3)) == 1.0);
  Eigen::VectorXd bad(1);
  bad << 1.5;
  CHECK_THROWS_AS(bernoulli_asymptotic_factor(bad), DomainError);

  const auto qp = solve_qp(kId2, vec2(1.0, 1.0));
  CHECK(uniform_trend_asymptotic(qp, 10.0) == doctest::Approx(1e-2).epsilon(1e-12));
  const auto partial = solve_qp(rho_model(0.5), vec2(1.0, 0.3));
  CHECK_THROWS_AS(uniform_trend_asymptotic(partial, 10.0), PartialIndexSet);
}
