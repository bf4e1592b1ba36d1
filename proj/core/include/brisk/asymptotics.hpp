#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "brisk/covariance.hpp"
#include "brisk/estimate.hpp"
#include "brisk/qp.hpp"
#include "brisk/scenario.hpp"
#include "brisk/tail.hpp"
#include "brisk/trend.hpp"

namespace brisk {

// Exact finite-horizon ruin probability of the 1-D Brownian risk process
// with constant drift: Phi(-u/(sigma sqrt(T)) - c sqrt(T)/sigma)
//   + exp(-2cu/sigma^2) Phi(-u/(sigma sqrt(T)) + c sqrt(T)/sigma).
// The second product is evaluated in log space so it never underflows
// spuriously.
double exact_ruin_1d(double u, double c, double sigma, double T);

// Horizon-truncated constant I_a(Lambda): Monte Carlo over paths of
// W_I(t) - a_I t with a per-path exact integral of e^{<lambda_I, x>} over
// the union of lower orthants anchored at the path's Pareto frontier.
// Requires |I| <= 3 (use the quadrature fallback beyond).
EstimateWithCI estimate_ia(const QpSolution& qp, const CovarianceModel& model, double horizon,
                           int steps_per_unit, std::int64_t n_paths, std::uint64_t seed);

// Same estimator reported at several horizons that share one path set,
// so the profile is non-decreasing path by path. `checkpoints` must be
// strictly increasing; the last entry is the full horizon.
std::vector<EstimateWithCI> estimate_ia_profile(const QpSolution& qp,
                                                const CovarianceModel& model,
                                                const std::vector<double>& checkpoints,
                                                int steps_per_unit, std::int64_t n_paths,
                                                std::uint64_t seed);

// Doubling rule for the horizon: starting from `horizon`, extends to
// 2*Lambda, 4*Lambda, ... until the relative increment of the shared-path
// profile drops below `increment_tol` (default 0.5%) or `max_doublings`
// is hit. The returned meta records the profile.
EstimateWithCI estimate_ia_extended(const QpSolution& qp, const CovarianceModel& model,
                                    double horizon, int steps_per_unit, std::int64_t n_paths,
                                    std::uint64_t seed, double increment_tol = 0.005,
                                    int max_doublings = 4);

// Tensor-grid quadrature over y_i = e^{lambda_i x_i} with the crossing
// probability estimated per node from one shared path set (common random
// numbers). Fallback for |I| > 3.
struct QuadratureOptions {
  double x_lo = 0.0;             // 0 = auto (-12 / min lambda_i)
  double x_hi = 0.0;             // 0 = auto (empirical frontier max + pad)
  int grid = 48;                 // nodes per axis
  int steps_per_unit = 512;
  std::int64_t inner_paths = 4000;
  std::uint64_t node_path_cap = 1000000000;  // hard cap on grid^|I| * inner_paths
};
EstimateWithCI estimate_ia_quadrature(const QpSolution& qp, const CovarianceModel& model,
                                      double horizon, const QuadratureOptions& options,
                                      std::uint64_t seed);

struct AsymptoticBudgets {
  std::int64_t ia_paths = 20000;
  int ia_steps = 4096;           // grid points per unit time for I_a paths
  std::int64_t tail_budget = 100000;
  int n_eta = 256;               // eta draws for uniform-box trends
};

// Assembled approximation psi_1(a u) ~ (prod lambda_i) I_a E[P(W(1) > au + eta)].
struct AsymptoticResult {
  QpSolution qp;
  EstimateWithCI ia;
  double lambda_product = 1.0;
  EstimateWithCI tail;       // E_eta[ P(W(1) > a u + eta) ]
  EstimateWithCI psi;        // product of the three factors
  double lambda_horizon = 0.0;
  double u = 0.0;
  std::string rescale_note;  // self-similarity rescaling applied for T != 1
};

AsymptoticResult asymptotic_psi(const RuinScenario& scenario, double ia_horizon,
                                const AsymptoticBudgets& budgets, std::uint64_t seed);

// Leading-order tail approximation
//   u^{-|I|} phi_Sigma(a~u + c) (prod lambda_i)^{-1} *
//     integral over x_J of 1{x_U <= 0} exp(<c~_J, x_J> - x_J^T (Sigma^{-1})_JJ x_J / 2)
// with c~ = Sigma^{-1} c. The J-integral is closed-form up to a Gaussian
// orthant factor on the weakly active coordinates.
double uniform_tail_expansion(const CovarianceModel& model, const QpSolution& qp, double u,
                              const Eigen::VectorXd& c, std::int64_t orthant_budget = 100000,
                              std::uint64_t seed = 0x5eedu);

// C_{K2,T} = 1 / P(W(T) > max(K2 T, 0)); the unclamped K2 T variant is
// recorded in meta for comparison.
EstimateWithCI upper_bound_constant(const CovarianceModel& model, const TrendDistribution& trend,
                                    double T, std::int64_t budget, std::uint64_t seed);

// prod_k (1 - p_k): the Bernoulli-trend reduction factor.
double bernoulli_asymptotic_factor(const Eigen::VectorXd& p);

// u^{-d} / prod lambda_i: the uniform-box reduction factor; requires a
// full active set.
double uniform_trend_asymptotic(const QpSolution& qp, double u);

}  // namespace brisk
