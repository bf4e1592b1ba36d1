#include "brisk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "brisk/errors.hpp"
#include "brisk/frontier.hpp"
#include "brisk/gaussian.hpp"
#include "brisk/rng.hpp"

namespace brisk {

namespace {

constexpr std::int64_t kIaChunk = 256;

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

struct IaGeometry {
  int m = 0;                  // |I|
  Eigen::MatrixXd chol_step;  // chol(Sigma_II) * sqrt(dt)
  Eigen::VectorXd drift;      // a_I * dt
  Eigen::VectorXd lambda;     // lambda_I
  double dt = 0.0;
};

IaGeometry ia_geometry(const QpSolution& qp, const CovarianceModel& model, int steps_per_unit) {
  IaGeometry g;
  g.m = static_cast<int>(qp.active_set.size());
  g.dt = 1.0 / steps_per_unit;
  const Eigen::MatrixXd sigma_ii = submatrix(model.sigma(), qp.active_set, qp.active_set);
  g.chol_step = cholesky_lower(sigma_ii) * std::sqrt(g.dt);
  g.drift = qp.barrier_active() * g.dt;
  g.lambda = qp.lambda_active();
  return g;
}

}  // namespace

double exact_ruin_1d(double u, double c, double sigma, double T) {
  if (!(sigma > 0.0)) throw DomainError("exact_ruin_1d: sigma must be positive");
  if (!(T > 0.0)) throw DomainError("exact_ruin_1d: T must be positive");
  if (!(u >= 0.0)) throw DomainError("exact_ruin_1d: u must be nonnegative");
  const double sq = std::sqrt(T);
  const double arg1 = -u / (sigma * sq) - c * sq / sigma;
  const double arg2 = -u / (sigma * sq) + c * sq / sigma;
  const double first = univariate_phi(arg1);
  const double log_second = -2.0 * c * u / (sigma * sigma) + log_phi(arg2);
  const double value = first + std::exp(log_second);
  return std::clamp(value, 0.0, 1.0);
}

std::vector<EstimateWithCI> estimate_ia_profile(const QpSolution& qp,
                                                const CovarianceModel& model,
                                                const std::vector<double>& checkpoints,
                                                int steps_per_unit, std::int64_t n_paths,
                                                std::uint64_t seed) {
  if (checkpoints.empty()) throw DomainError("estimate_ia: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] >= 0.0)) throw DomainError("estimate_ia: horizon must be >= 0");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) {
      throw DomainError("estimate_ia: checkpoints must be strictly increasing");
    }
  }
  if (steps_per_unit < 256) throw DomainError("estimate_ia: needs >= 256 steps per unit time");
  if (n_paths < 1000) throw DomainError("estimate_ia: needs >= 1000 paths");
  const int m = static_cast<int>(qp.active_set.size());
  if (m > 3) {
    throw DimensionTooLarge("estimate_ia handles |I| <= 3; use estimate_ia_quadrature");
  }

  const IaGeometry g = ia_geometry(qp, model, steps_per_unit);
  const std::size_t n_ckpt = checkpoints.size();
  std::vector<std::int64_t> ckpt_step(n_ckpt);
  for (std::size_t c = 0; c < n_ckpt; ++c) {
    ckpt_step[c] = std::llround(checkpoints[c] * steps_per_unit);
  }
  const std::int64_t n_steps = ckpt_step.back();

  struct Partial {
    std::vector<double> sum, sum_sq;
  };
  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(n_paths) + kIaChunk - 1) / kIaChunk;
  std::vector<Partial> partials(n_chunks);

  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::NormalSource normals(seed, rng::StreamTag::ia_path, chunk);
    Partial part;
    part.sum.assign(n_ckpt, 0.0);
    part.sum_sq.assign(n_ckpt, 0.0);
    const std::int64_t p0 = static_cast<std::int64_t>(chunk) * kIaChunk;
    const std::int64_t p1 = std::min<std::int64_t>(p0 + kIaChunk, n_paths);

    std::vector<Eigen::Vector3d> points;  // |I| = 3 only
    if (g.m == 3) points.reserve(n_steps + 1);

    for (std::int64_t p = p0; p < p1; ++p) {
      auto record = [&](std::size_t c, double value) {
        part.sum[c] += value;
        part.sum_sq[c] += value * value;
      };
      if (g.m == 1) {
        const double scale = g.chol_step(0, 0);
        const double drift = g.drift[0];
        const double lambda = g.lambda[0];
        double w = 0.0, peak = 0.0;
        std::size_t c = 0;
        while (c < n_ckpt && ckpt_step[c] == 0) record(c++, std::exp(lambda * peak) / lambda);
        for (std::int64_t k = 1; k <= n_steps; ++k) {
          w += scale * normals() - drift;
          peak = std::max(peak, w);
          while (c < n_ckpt && ckpt_step[c] == k) record(c++, std::exp(lambda * peak) / lambda);
        }
      } else if (g.m == 2) {
        Staircase2d stairs;
        stairs.insert(0.0, 0.0);
        double w0 = 0.0, w1 = 0.0, t_drift0 = 0.0, t_drift1 = 0.0;
        double cached = stairs.integral(g.lambda[0], g.lambda[1]);
        bool dirty = false;
        std::size_t c = 0;
        auto value = [&] {
          if (dirty) {
            cached = stairs.integral(g.lambda[0], g.lambda[1]);
            dirty = false;
          }
          return cached;
        };
        while (c < n_ckpt && ckpt_step[c] == 0) record(c++, value());
        for (std::int64_t k = 1; k <= n_steps; ++k) {
          const double z0 = normals(), z1 = normals();
          w0 += g.chol_step(0, 0) * z0;
          w1 += g.chol_step(1, 0) * z0 + g.chol_step(1, 1) * z1;
          t_drift0 += g.drift[0];
          t_drift1 += g.drift[1];
          dirty = stairs.insert(w0 - t_drift0, w1 - t_drift1) || dirty;
          while (c < n_ckpt && ckpt_step[c] == k) record(c++, value());
        }
      } else {
        points.clear();
        Eigen::Vector3d w = Eigen::Vector3d::Zero(), td = Eigen::Vector3d::Zero(), z;
        points.emplace_back(Eigen::Vector3d::Zero());
        for (std::int64_t k = 1; k <= n_steps; ++k) {
          for (int i = 0; i < 3; ++i) z[i] = normals();
          for (int i = 0; i < 3; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += g.chol_step(i, j) * z[j];
            w[i] += acc;
            td[i] += g.drift[i];
          }
          points.emplace_back(w - td);
        }
        for (std::size_t c = 0; c < n_ckpt; ++c) {
          std::vector<Eigen::VectorXd> prefix;
          prefix.reserve(ckpt_step[c] + 1);
          for (std::int64_t k = 0; k <= ckpt_step[c]; ++k) prefix.emplace_back(points[k]);
          record(c, frontier_exp_integral(prefix, g.lambda));
        }
      }
    }
    partials[chunk] = std::move(part);
  });

  std::vector<EstimateWithCI> out(n_ckpt);
  for (std::size_t c = 0; c < n_ckpt; ++c) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& part : partials) {
      sum += part.sum[c];
      sum_sq += part.sum_sq[c];
    }
    const double n = static_cast<double>(n_paths);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    out[c].point = mean;
    out[c].std_error = std::sqrt(var / n);
    out[c].n = n_paths;
    out[c].seed = seed;
    out[c].meta = "ia-pathwise |I|=" + std::to_string(m) + " horizon=" +
                  std::to_string(checkpoints[c]) + " steps/unit=" + std::to_string(steps_per_unit);
  }
  return out;
}

EstimateWithCI estimate_ia(const QpSolution& qp, const CovarianceModel& model, double horizon,
                           int steps_per_unit, std::int64_t n_paths, std::uint64_t seed) {
  if (!(horizon >= 0.0)) throw DomainError("estimate_ia: horizon must be >= 0");
  if (horizon == 0.0) {
    // Single grid point t = 0: the frontier is the origin and the
    // integral is exactly prod 1/lambda_i.
    EstimateWithCI est;
    est.point = 1.0;
    for (int i : qp.active_set) est.point /= qp.lambda[i];
    est.std_error = 0.0;
    est.n = n_paths;
    est.seed = seed;
    est.meta = "ia-pathwise horizon=0 (deterministic)";
    return est;
  }
  return estimate_ia_profile(qp, model, {horizon}, steps_per_unit, n_paths, seed).back();
}

EstimateWithCI estimate_ia_extended(const QpSolution& qp, const CovarianceModel& model,
                                    double horizon, int steps_per_unit, std::int64_t n_paths,
                                    std::uint64_t seed, double increment_tol, int max_doublings) {
  if (!(horizon > 0.0)) throw DomainError("estimate_ia_extended: horizon must be positive");
  std::vector<double> checkpoints{horizon};
  for (int k = 0; k < max_doublings; ++k) checkpoints.push_back(checkpoints.back() * 2.0);

  // One shared path set across all horizons: the profile is monotone
  // path by path, so consecutive increments are exact, not noisy.
  const auto profile = estimate_ia_profile(qp, model, checkpoints, steps_per_unit, n_paths, seed);
  std::size_t chosen = profile.size() - 1;
  std::string trace;
  for (std::size_t k = 0; k + 1 < profile.size(); ++k) {
    const double increment = (profile[k + 1].point - profile[k].point) /
                             std::max(profile[k].point, 1e-300);
    trace += " I_a(" + std::to_string(checkpoints[k]) + ")=" + std::to_string(profile[k].point);
    if (increment < increment_tol) {
      chosen = k + 1;
      break;
    }
  }
  EstimateWithCI est = profile[chosen];
  est.meta += " extension:" + trace + " chosen horizon=" + std::to_string(checkpoints[chosen]);
  return est;
}

EstimateWithCI estimate_ia_quadrature(const QpSolution& qp, const CovarianceModel& model,
                                      double horizon, const QuadratureOptions& options,
                                      std::uint64_t seed) {
  const int m = static_cast<int>(qp.active_set.size());
  if (m < 1) throw DomainError("estimate_ia_quadrature: empty active set");
  if (!(horizon > 0.0)) throw DomainError("estimate_ia_quadrature: horizon must be positive");
  const int grid = options.grid;
  if (grid < 4) throw DomainError("estimate_ia_quadrature: grid too coarse");
  double nodes_d = 1.0;
  for (int i = 0; i < m; ++i) nodes_d *= grid;
  if (nodes_d * static_cast<double>(options.inner_paths) >
      static_cast<double>(options.node_path_cap)) {
    throw BudgetTooSmall("estimate_ia_quadrature: grid^|I| * inner_paths exceeds cap " +
                         std::to_string(options.node_path_cap));
  }
  const IaGeometry g = ia_geometry(qp, model, options.steps_per_unit);
  const std::int64_t n_steps = std::llround(horizon * options.steps_per_unit);
  const std::int64_t n_paths = options.inner_paths;

  // One shared path set; each path reduced to its Pareto frontier.
  std::vector<std::vector<Eigen::VectorXd>> frontiers(n_paths);
  const std::uint64_t n_chunks = (static_cast<std::uint64_t>(n_paths) + kIaChunk - 1) / kIaChunk;
  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::NormalSource normals(seed, rng::StreamTag::quad_path, chunk);
    const std::int64_t p0 = static_cast<std::int64_t>(chunk) * kIaChunk;
    const std::int64_t p1 = std::min<std::int64_t>(p0 + kIaChunk, n_paths);
    std::vector<Eigen::VectorXd> points;
    Eigen::VectorXd w(g.m), td(g.m), z(g.m);
    for (std::int64_t p = p0; p < p1; ++p) {
      points.clear();
      points.reserve(n_steps + 1);
      w.setZero();
      td.setZero();
      points.push_back(Eigen::VectorXd::Zero(g.m));
      for (std::int64_t k = 1; k <= n_steps; ++k) {
        for (int i = 0; i < g.m; ++i) z[i] = normals();
        for (int i = 0; i < g.m; ++i) {
          double acc = 0.0;
          for (int j = 0; j <= i; ++j) acc += g.chol_step(i, j) * z[j];
          w[i] += acc;
          td[i] += g.drift[i];
        }
        points.push_back(w - td);
      }
      frontiers[p] = pareto_maximal(points);
    }
  });

  // Node coordinates in the flattened variables y_i = e^{lambda_i x_i}.
  // Reflection-bound decay rates: P(sup_t (W_i - a_i t) > x) <= e^{-r_i x}
  // with r_i = 2 a_i / sigma_ii; the integrand decays at r_i - lambda_i.
  const Eigen::VectorXd a_active = qp.barrier_active();
  const Eigen::MatrixXd sigma_ii = submatrix(model.sigma(), qp.active_set, qp.active_set);
  Eigen::VectorXd decay(m);
  bool bound_valid = true;
  for (int i = 0; i < m; ++i) {
    decay[i] = 2.0 * a_active[i] / sigma_ii(i, i) - g.lambda[i];
    bound_valid = bound_valid && decay[i] > 0.0;
  }

  const double lambda_min = g.lambda.minCoeff();
  const double x_lo = options.x_lo != 0.0 ? options.x_lo : -12.0 / lambda_min;
  Eigen::VectorXd peak = Eigen::VectorXd::Constant(m, 0.0);
  for (const auto& frontier : frontiers)
    for (const auto& v : frontier) peak = peak.cwiseMax(v);

  double lambda_prod = 1.0;
  for (int i = 0; i < m; ++i) lambda_prod *= g.lambda[i];

  // Upper truncation: past the deepest excursion the empirical crossing
  // probability is zero; the analytic bound fixes the box so the
  // truncated tail stays below 1e-6 of the integral (audited below).
  Eigen::VectorXd x_hi(m);
  if (options.x_hi != 0.0) {
    x_hi.setConstant(options.x_hi);
  } else {
    for (int i = 0; i < m; ++i) {
      double deep = peak[i] + 2.0 / g.lambda[i];
      if (bound_valid) deep = std::max(deep, 16.0 / decay[i]);
      x_hi[i] = deep;
    }
  }

  // Tensor quadrature on an x-uniform partition per axis with exact
  // y-cell masses (the substitution y = e^{lambda x} makes the weight a
  // plain volume); P is evaluated at cell midpoints from the shared
  // paths, so nodes use common random numbers.
  auto evaluate = [&](int n_per_axis, double* se_mc_out) {
    std::vector<std::vector<double>> mid(m), mass(m);
    for (int i = 0; i < m; ++i) {
      const double dx = (x_hi[i] - x_lo) / n_per_axis;
      mid[i].resize(n_per_axis);
      mass[i].resize(n_per_axis);
      for (int j = 0; j < n_per_axis; ++j) {
        const double left = x_lo + j * dx;
        mid[i][j] = left + 0.5 * dx;
        mass[i][j] = (std::exp(g.lambda[i] * (left + dx)) - std::exp(g.lambda[i] * left)) /
                     g.lambda[i];
      }
    }
    std::int64_t total_nodes = 1;
    for (int i = 0; i < m; ++i) total_nodes *= n_per_axis;

    std::vector<std::uint8_t> mark(total_nodes);
    std::vector<int> hi_idx(m), idx(m);
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t p = 0; p < n_paths; ++p) {
      std::fill(mark.begin(), mark.end(), 0);
      double marked_mass = 0.0;
      for (const auto& v : frontiers[p]) {
        bool any = true;
        for (int i = 0; i < m; ++i) {
          int count = 0;
          while (count < n_per_axis && mid[i][count] < v[i]) ++count;
          hi_idx[i] = count;
          if (count == 0) {
            any = false;
            break;
          }
        }
        if (!any) continue;
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
          std::int64_t flat = 0;
          double cell_mass = 1.0;
          for (int i = m - 1; i >= 0; --i) {
            flat = flat * n_per_axis + idx[i];
            cell_mass *= mass[i][idx[i]];
          }
          if (!mark[flat]) {
            mark[flat] = 1;
            marked_mass += cell_mass;
          }
          int axis = 0;
          while (axis < m) {
            if (++idx[axis] < hi_idx[axis]) break;
            idx[axis] = 0;
            ++axis;
          }
          if (axis == m) break;
        }
      }
      sum += marked_mass;
      sum_sq += marked_mass * marked_mass;
    }
    const double n = static_cast<double>(n_paths);
    const double mean = sum / n;
    if (se_mc_out) {
      const double var = std::max(0.0, sum_sq / n - mean * mean);
      *se_mc_out = std::sqrt(var / n);
    }
    return mean;
  };

  double se_mc = 0.0;
  const double value = evaluate(grid, &se_mc);
  const double value_coarse = evaluate(std::max(4, grid / 2), nullptr);
  const double quad_err = std::abs(value - value_coarse);

  // Truncation audit: analytic bound on the integrand past x_hi relative
  // to the running integral, plus the (typically zero) empirical corner
  // value; both land in meta, the bound also widens the error.
  double tail_bound = std::numeric_limits<double>::quiet_NaN();
  if (bound_valid) {
    tail_bound = 0.0;
    for (int i = 0; i < m; ++i) {
      double strip = std::exp(-decay[i] * x_hi[i]) / decay[i];
      for (int j = 0; j < m; ++j) {
        if (j != i) strip *= 1.0 / g.lambda[j] + 1.0 / decay[j];
      }
      tail_bound += strip;
    }
  }
  std::int64_t corner_hits = 0;
  for (const auto& frontier : frontiers) {
    for (const auto& v : frontier) {
      if ((v.array() > x_hi.array()).all()) {
        ++corner_hits;
        break;
      }
    }
  }
  const double audit_rel =
      (std::isfinite(tail_bound) ? tail_bound : static_cast<double>(corner_hits)) /
      std::max(value, 1e-300);

  EstimateWithCI est;
  est.point = value;
  double var = se_mc * se_mc + quad_err * quad_err;
  if (std::isfinite(tail_bound)) var += tail_bound * tail_bound;
  est.std_error = std::sqrt(var);
  est.n = n_paths;
  est.seed = seed;
  est.meta = "ia-quadrature grid=" + std::to_string(grid) + " inner_paths=" +
             std::to_string(n_paths) + " x_lo=" + std::to_string(x_lo) + " audit=" +
             std::to_string(audit_rel) + " corner_hits=" + std::to_string(corner_hits);
  return est;
}

AsymptoticResult asymptotic_psi(const RuinScenario& scenario, double ia_horizon,
                                const AsymptoticBudgets& budgets, std::uint64_t seed) {
  scenario.validate();
  if (!(ia_horizon > 0.0)) throw DomainError("asymptotic_psi: horizon must be positive");

  AsymptoticResult result;
  result.lambda_horizon = ia_horizon;
  result.u = scenario.level;

  // Self-similarity: W(tT) has the law of sqrt(T) W(t), so T rescales to 1
  // with a -> a / sqrt(T) and eta -> eta sqrt(T).
  Eigen::VectorXd a = scenario.barrier;
  TrendDistribution trend = scenario.trend;
  if (scenario.horizon != 1.0) {
    const double s = std::sqrt(scenario.horizon);
    a /= s;
    trend = trend.scaled(s);
    result.rescale_note = "T=" + std::to_string(scenario.horizon) +
                          " rescaled: a/sqrt(T), eta*sqrt(T)";
  }

  result.qp = solve_qp(scenario.model, a);
  result.lambda_product = result.qp.lambda_product();

  if (result.qp.active_set.size() <= 3) {
    result.ia = estimate_ia(result.qp, scenario.model, ia_horizon, budgets.ia_steps,
                            budgets.ia_paths, seed);
  } else {
    QuadratureOptions options;
    options.inner_paths = std::min<std::int64_t>(budgets.ia_paths, 4000);
    const int m = static_cast<int>(result.qp.active_set.size());
    options.grid = std::max(
        6, static_cast<int>(std::floor(std::pow(2e7 / static_cast<double>(options.inner_paths),
                                                1.0 / m))));
    result.ia = estimate_ia_quadrature(result.qp, scenario.model, ia_horizon, options, seed);
  }

  result.tail = tail_term(scenario.model, a * scenario.level, trend, budgets.tail_budget,
                          budgets.n_eta, seed);

  result.psi.point = result.lambda_product * result.ia.point * result.tail.point;
  double rel_sq = 0.0;
  if (result.ia.point > 0.0) rel_sq += std::pow(result.ia.std_error / result.ia.point, 2);
  if (result.tail.point > 0.0) rel_sq += std::pow(result.tail.std_error / result.tail.point, 2);
  result.psi.std_error = result.psi.point * std::sqrt(rel_sq);
  result.psi.n = std::min(result.ia.n, result.tail.n);
  result.psi.seed = seed;
  result.psi.meta = "psi = lambda_product * ia * tail";
  return result;
}

double uniform_tail_expansion(const CovarianceModel& model, const QpSolution& qp, double u,
                              const Eigen::VectorXd& c, std::int64_t orthant_budget,
                              std::uint64_t seed) {
  if (!(u > 0.0)) throw DomainError("uniform_tail_expansion: u must be positive");
  if (c.size() != model.dim() || !c.allFinite()) {
    throw DimensionMismatch("uniform_tail_expansion: bad shift vector");
  }

  const int n_active = static_cast<int>(qp.active_set.size());
  const double log_dens = log_density(model, qp.a_tilde * u + c);
  double value = std::exp(log_dens - n_active * std::log(u)) / qp.lambda_product();

  if (qp.complement.empty()) return value;

  // J-integral: complete the square in exp(<c~_J, x> - x^T Q x / 2) with
  // Q = (Sigma^{-1})_JJ, leaving a Gaussian orthant factor on U.
  const Eigen::VectorXd c_tilde = model.solve_sigma(c);
  const Eigen::VectorXd c_j = subvector(c_tilde, qp.complement);
  const Eigen::MatrixXd q = submatrix(model.sigma_inv(), qp.complement, qp.complement);
  const Eigen::MatrixXd l_q = cholesky_lower(q);
  const Eigen::VectorXd mu =
      l_q.transpose().triangularView<Eigen::Upper>().solve(
          l_q.triangularView<Eigen::Lower>().solve(c_j));
  const double log_det_q = 2.0 * l_q.diagonal().array().log().sum();
  const double log_norm = 0.5 * c_j.dot(mu) +
                          0.5 * qp.complement.size() * std::log(2.0 * std::numbers::pi) -
                          0.5 * log_det_q;

  double orthant = 1.0;
  if (!qp.weak_set.empty()) {
    // positions of U inside J
    std::vector<int> u_pos;
    for (std::size_t j = 0; j < qp.complement.size(); ++j) {
      if (std::find(qp.weak_set.begin(), qp.weak_set.end(), qp.complement[j]) !=
          qp.weak_set.end()) {
        u_pos.push_back(static_cast<int>(j));
      }
    }
    // Z ~ N(mu, Q^{-1}); P(Z_U <= 0) = P(N(0, V) >= mu_U) with V = (Q^{-1})_UU.
    const Eigen::MatrixXd q_inv = l_q.transpose().triangularView<Eigen::Upper>().solve(
        l_q.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd::Identity(qp.complement.size(), qp.complement.size())));
    const Eigen::VectorXd mu_u = subvector(mu, u_pos);
    if (u_pos.size() == 1) {
      orthant = univariate_phibar(mu_u[0] / std::sqrt(q_inv(u_pos[0], u_pos[0])));
    } else {
      const Eigen::MatrixXd v = submatrix(q_inv, u_pos, u_pos);
      orthant = tail_probability(CovarianceModel::from_covariance(v), mu_u, orthant_budget,
                                 seed, TailStrategy::plain)
                    .point;
    }
  }
  return value * std::exp(log_norm) * orthant;
}

EstimateWithCI upper_bound_constant(const CovarianceModel& model, const TrendDistribution& trend,
                                    double T, std::int64_t budget, std::uint64_t seed) {
  if (!(T > 0.0)) throw DomainError("upper_bound_constant: T must be positive");
  if (trend.dim() != model.dim()) throw DimensionMismatch("upper_bound_constant: trend dim");
  const double sq = std::sqrt(T);
  const Eigen::VectorXd k2t = trend.upper_bound() * T;
  const Eigen::VectorXd clamped = k2t.cwiseMax(0.0);

  // P(W(T) > b) = P(W(1) > b / sqrt(T)).
  const EstimateWithCI p = tail_probability(model, clamped / sq, budget, seed);
  if (p.point < 1e-12) {
    throw DegenerateBound("upper bound constant exceeds 1e12; cannot certify");
  }
  const EstimateWithCI p_raw =
      tail_probability(model, k2t / sq, budget, rng::splitmix64(seed ^ 0x7261u));

  EstimateWithCI est;
  est.point = 1.0 / p.point;
  est.std_error = p.std_error / (p.point * p.point);
  est.n = p.n;
  est.seed = seed;
  est.meta = "C_K2T max-form; raw K2T form C=" +
             std::to_string(p_raw.point > 0.0 ? 1.0 / p_raw.point : 0.0);
  return est;
}

double bernoulli_asymptotic_factor(const Eigen::VectorXd& p) {
  if ((p.array() < 0.0).any() || (p.array() > 1.0).any() || !p.allFinite()) {
    throw DomainError("bernoulli_asymptotic_factor: probabilities must lie in [0,1]");
  }
  double out = 1.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) out *= 1.0 - p[i];
  return out;
}

double uniform_trend_asymptotic(const QpSolution& qp, double u) {
  if (!(u > 0.0)) throw DomainError("uniform_trend_asymptotic: u must be positive");
  if (!qp.complement.empty()) {
    throw PartialIndexSet("uniform-trend reduction requires a full active set");
  }
  const int d = static_cast<int>(qp.active_set.size());
  return std::pow(u, -d) / qp.lambda_product();
}

}  // namespace brisk
