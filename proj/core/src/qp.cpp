#include "brisk/qp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "brisk/errors.hpp"

namespace brisk {

namespace {

constexpr int kMaxDim = 20;

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

void validate_barrier(const Eigen::VectorXd& a, int dim) {
  if (a.size() != dim) throw DimensionMismatch("barrier dimension mismatch");
  if (!a.allFinite()) throw DomainError("barrier has non-finite entries");
  if ((a.array() <= 0.0).all()) {
    throw InvalidBarrier("barrier must have at least one strictly positive component");
  }
}

// Tests the converse conditions of the quadratic programming
// characterization on candidate set I; fills `sol` and returns true when
// both hold. w = (Sigma_II)^{-1} a_I must be strictly positive and the
// induced a_tilde on the complement must dominate a there.
bool try_candidate(const CovarianceModel& model, const Eigen::VectorXd& a,
                   const std::vector<int>& active, const QpTolerances& tol, QpSolution* sol) {
  const int d = model.dim();
  std::vector<int> complement;
  complement.reserve(d - active.size());
  for (int i = 0, k = 0; i < d; ++i) {
    if (k < static_cast<int>(active.size()) && active[k] == i) {
      ++k;
    } else {
      complement.push_back(i);
    }
  }

  const Eigen::MatrixXd sigma_ii = submatrix(model.sigma(), active, active);
  const Eigen::VectorXd a_i = subvector(a, active);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_ii);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd w = llt.solve(a_i);

  const double w_scale = w.cwiseAbs().maxCoeff();
  const double positivity_floor = tol.activity * std::max(w_scale, 1e-300);
  if (!(w.array() > positivity_floor).all()) return false;

  Eigen::VectorXd a_tilde = a;
  if (!complement.empty()) {
    const Eigen::MatrixXd sigma_ji = submatrix(model.sigma(), complement, active);
    const Eigen::VectorXd a_j_tilde = sigma_ji * w;
    for (std::size_t j = 0; j < complement.size(); ++j) {
      const double slack = tol.activity * (1.0 + std::abs(a[complement[j]]));
      if (a_j_tilde[j] < a[complement[j]] - slack) return false;
      a_tilde[complement[j]] = a_j_tilde[j];
    }
  }

  sol->a_tilde = std::move(a_tilde);
  sol->active_set = active;
  sol->complement = std::move(complement);
  sol->weak_set.clear();
  for (int j : sol->complement) {
    if (std::abs(sol->a_tilde[j] - a[j]) <= tol.activity * (1.0 + std::abs(a[j]))) {
      sol->weak_set.push_back(j);
    }
  }
  sol->lambda = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < active.size(); ++i) sol->lambda[active[i]] = w[i];
  sol->objective = a_i.dot(w);

  // Consistency with the full-matrix route.
  const double obj_full = sol->a_tilde.dot(model.sigma_inv() * sol->a_tilde);
  if (std::abs(obj_full - sol->objective) > 1e-8 * std::max(1.0, std::abs(sol->objective))) {
    throw NoFeasibleSet("objective mismatch between active-set and full solve; "
                        "model too ill-conditioned");
  }
  return true;
}

}  // namespace

Eigen::VectorXd QpSolution::lambda_active() const { return subvector(lambda, active_set); }

Eigen::VectorXd QpSolution::barrier_active() const { return subvector(a_tilde, active_set); }

double QpSolution::lambda_product() const {
  double p = 1.0;
  for (int i : active_set) p *= lambda[i];
  return p;
}

QpSolution solve_qp(const CovarianceModel& model, const Eigen::VectorXd& a,
                    const QpTolerances& tol) {
  const int d = model.dim();
  validate_barrier(a, d);
  if (d > kMaxDim) {
    throw DimensionTooLarge("solve_qp enumerates 2^d index sets; d=" + std::to_string(d) +
                            " exceeds " + std::to_string(kMaxDim));
  }

  // Candidate sets by increasing cardinality; uniqueness guarantees the
  // first passing set is the only one.
  std::vector<std::vector<std::uint32_t>> by_size(d + 1);
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    by_size[std::popcount(mask)].push_back(mask);
  }
  QpSolution sol;
  std::vector<int> active;
  for (int size = 1; size <= d; ++size) {
    for (std::uint32_t mask : by_size[size]) {
      active.clear();
      for (int i = 0; i < d; ++i)
        if (mask & (1u << i)) active.push_back(i);
      if (try_candidate(model, a, active, tol, &sol)) return sol;
    }
  }
  throw NoFeasibleSet("no index set passed the KKT tests at tolerance " +
                      std::to_string(tol.activity));
}

Eigen::VectorXd solve_qp_bruteforce(const CovarianceModel& model, const Eigen::VectorXd& a,
                                    int grid) {
  const int d = model.dim();
  validate_barrier(a, d);
  if (d > 3) throw DimensionTooLarge("brute-force oracle supports d <= 3");
  if (grid < 100) throw DomainError("brute-force oracle needs grid >= 100");

  const Eigen::MatrixXd& q = model.sigma_inv();
  auto objective = [&](const Eigen::VectorXd& x) { return x.dot(q * x); };

  // Grid seeding over [a, a+5].
  Eigen::VectorXd best = a;
  double best_val = objective(best);
  std::vector<int> idx(d, 0);
  Eigen::VectorXd x(d);
  const double step = 5.0 / (grid - 1);
  const std::int64_t total = static_cast<std::int64_t>(std::pow(grid, d));
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    for (int i = 0; i < d; ++i) {
      x[i] = a[i] + step * static_cast<double>(rest % grid);
      rest /= grid;
    }
    const double val = objective(x);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }

  // Projected gradient refinement; the projection enforces x >= a only,
  // so the optimum may leave the seeding box. Frobenius norm bounds the
  // spectral norm, giving a safe step size.
  const double lipschitz = 2.0 * q.norm();
  const double alpha = 1.0 / lipschitz;
  Eigen::VectorXd cur = best;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd next = (cur - alpha * 2.0 * (q * cur)).cwiseMax(a);
    if ((next - cur).cwiseAbs().maxCoeff() < 1e-13) {
      cur = next;
      break;
    }
    cur = next;
  }
  return cur;
}

EquicorrSpec::EquicorrSpec(int d, double r, Eigen::VectorXd a)
    : dim(d), rho(r), barrier(std::move(a)) {
  if (dim < 2) throw DimensionMismatch("equicorrelated model needs dim >= 2");
  if (!(rho > -1.0 / (dim - 1) && rho < 1.0)) {
    throw RhoOutOfRange("rho " + std::to_string(rho) + " outside (-1/(d-1), 1) for d=" +
                        std::to_string(dim));
  }
  if (barrier.size() != dim) throw DimensionMismatch("barrier dimension mismatch");
  if (!barrier.allFinite()) throw DomainError("barrier has non-finite entries");
}

CovarianceModel EquicorrSpec::model() const { return CovarianceModel::equicorrelated(dim, rho); }

QpSolution solve_equicorrelated(const EquicorrSpec& spec, const QpTolerances& tol) {
  const int d = spec.dim;
  const double rho = spec.rho;
  const Eigen::VectorXd& a = spec.barrier;
  validate_barrier(a, d);

  // Sort descending, remember the permutation; for equicorrelated Sigma
  // the active set is a prefix of the sorted barrier.
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) { return a[i] > a[j]; });

  double prefix_sum = 0.0;
  for (int k = 1; k <= d; ++k) {
    prefix_sum += a[perm[k - 1]];
    const double shrink = rho * prefix_sum / (1.0 + rho * (k - 1));

    // w = (Sigma_II)^{-1} a_I = (a_I - shrink * 1) / (1 - rho)
    bool positive = true;
    double w_scale = 0.0;
    for (int i = 0; i < k; ++i) w_scale = std::max(w_scale, std::abs((a[perm[i]] - shrink) / (1.0 - rho)));
    const double floor = tol.activity * std::max(w_scale, 1e-300);
    for (int i = 0; i < k && positive; ++i) {
      positive = (a[perm[i]] - shrink) / (1.0 - rho) > floor;
    }
    if (!positive) continue;

    // a_tilde on the complement is the constant rho * S_k / (1+rho(k-1)).
    bool feasible = true;
    for (int j = k; j < d && feasible; ++j) {
      const double slack = tol.activity * (1.0 + std::abs(a[perm[j]]));
      feasible = shrink >= a[perm[j]] - slack;
    }
    if (!feasible) continue;

    QpSolution sol;
    sol.a_tilde = a;
    sol.lambda = Eigen::VectorXd::Zero(d);
    sol.active_set.clear();
    sol.complement.clear();
    sol.weak_set.clear();
    for (int i = 0; i < k; ++i) {
      sol.active_set.push_back(perm[i]);
      sol.lambda[perm[i]] = (a[perm[i]] - shrink) / (1.0 - rho);
    }
    double objective = 0.0;
    for (int i = 0; i < k; ++i) objective += a[perm[i]] * sol.lambda[perm[i]];
    sol.objective = objective;
    for (int j = k; j < d; ++j) {
      sol.complement.push_back(perm[j]);
      sol.a_tilde[perm[j]] = shrink;
      if (std::abs(shrink - a[perm[j]]) <= tol.activity * (1.0 + std::abs(a[perm[j]]))) {
        sol.weak_set.push_back(perm[j]);
      }
    }
    std::sort(sol.active_set.begin(), sol.active_set.end());
    std::sort(sol.complement.begin(), sol.complement.end());
    std::sort(sol.weak_set.begin(), sol.weak_set.end());
    return sol;
  }

  // Ties or borderline tolerances can defeat the prefix search.
  return solve_qp(spec.model(), a, tol);
}

FullIndexCheck full_index_condition(const EquicorrSpec& spec) {
  const Eigen::VectorXd& a = spec.barrier;
  const int d = spec.dim;
  for (int i = 0; i + 1 < d; ++i) {
    if (a[i] < a[i + 1]) throw DomainError("barrier must be sorted descending");
  }
  if (!(a[0] > 0.0)) throw InvalidBarrier("leading barrier component must be positive");

  const double rho = spec.rho;
  const double total = a.sum();
  const double shrink = rho * total / (1.0 + rho * (d - 1));

  FullIndexCheck check;
  // Sigma^{-1} a = (a - shrink * 1) / (1 - rho) componentwise.
  check.kkt = true;
  for (int i = 0; i < d; ++i) {
    if (!((a[i] - shrink) / (1.0 - rho) > 0.0)) {
      check.kkt = false;
      break;
    }
  }
  check.printed_inequality = a[d - 1] > total / (1.0 + rho * (d - 1));
  return check;
}

}  // namespace brisk
