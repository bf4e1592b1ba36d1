#include "brisk/tail.hpp"

#include <cmath>
#include <vector>

#include "brisk/errors.hpp"
#include "brisk/qp.hpp"
#include "brisk/rng.hpp"

namespace brisk {

namespace {

constexpr std::int64_t kChunk = 4096;
constexpr double kStandardizedSwitch = 2.0;

struct Node {
  Eigen::VectorXd barrier;  // b + eta_k
  double weight;
};

struct ChunkPartial {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> node_sums;  // only filled in eta-MC mode
};

// Shared engine: one weighted sample batch scored against all nodes.
EstimateWithCI run_engine(const CovarianceModel& model, const std::vector<Node>& nodes,
                          bool track_nodes, std::int64_t budget, std::uint64_t seed,
                          TailStrategy strategy, const Eigen::VectorXd& center_barrier,
                          std::string meta_prefix) {
  const int d = model.dim();
  bool tilt = false;
  switch (strategy) {
    case TailStrategy::plain:
      break;
    case TailStrategy::tilted:
      tilt = true;
      break;
    case TailStrategy::automatic: {
      for (int i = 0; i < d; ++i) {
        if (center_barrier[i] / std::sqrt(model.sigma()(i, i)) > kStandardizedSwitch) {
          tilt = true;
          break;
        }
      }
      break;
    }
  }
  // Tilting needs the quadratic program, which is undefined on the
  // nonpositive orthant; fall back to plain Monte Carlo there.
  if (tilt && (center_barrier.array() <= 0.0).all()) {
    tilt = false;
    meta_prefix += " fallback=nonpositive-barrier";
  }

  Eigen::VectorXd tilt_point = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd lambda_l = Eigen::VectorXd::Zero(d);  // lambda^T L, row form
  double half_objective = 0.0;
  if (tilt) {
    const QpSolution qp = solve_qp(model, center_barrier);
    tilt_point = qp.a_tilde;
    lambda_l = (qp.lambda.transpose() * model.chol()).transpose();
    half_objective = 0.5 * qp.objective;
  }

  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(budget) + kChunk - 1) / kChunk;
  std::vector<ChunkPartial> partials(n_chunks);
  const Eigen::MatrixXd& l = model.chol();

  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::NormalSource normals(seed, rng::StreamTag::tail_normals, chunk);
    ChunkPartial part;
    if (track_nodes) part.node_sums.assign(nodes.size(), 0.0);
    const std::int64_t i0 = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t i1 = std::min<std::int64_t>(i0 + kChunk, budget);
    Eigen::VectorXd z(d), x(d);
    for (std::int64_t i = i0; i < i1; ++i) {
      for (int k = 0; k < d; ++k) z[k] = normals();
      for (int k = 0; k < d; ++k) {
        double acc = tilt_point[k];
        for (int m = 0; m <= k; ++m) acc += l(k, m) * z[m];
        x[k] = acc;
      }
      double w = 1.0;
      if (tilt) w = std::exp(-lambda_l.dot(z) - half_objective);
      double g = 0.0;
      for (std::size_t nd = 0; nd < nodes.size(); ++nd) {
        bool above = true;
        const Eigen::VectorXd& bar = nodes[nd].barrier;
        for (int k = 0; k < d && above; ++k) above = x[k] > bar[k];
        if (above) {
          g += nodes[nd].weight;
          if (track_nodes) part.node_sums[nd] += w;
        }
      }
      const double v = w * g;
      part.sum += v;
      part.sum_sq += v * v;
    }
    partials[chunk] = std::move(part);
  });

  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> node_sums(track_nodes ? nodes.size() : 0, 0.0);
  for (const auto& part : partials) {
    sum += part.sum;
    sum_sq += part.sum_sq;
    for (std::size_t nd = 0; nd < node_sums.size(); ++nd) node_sums[nd] += part.node_sums[nd];
  }

  const double n = static_cast<double>(budget);
  const double mean = sum / n;
  double var;
  if (!tilt && nodes.size() == 1) {
    var = mean * (1.0 - mean);  // Bernoulli outcome
  } else {
    var = std::max(0.0, sum_sq / n - mean * mean);
  }
  double se = std::sqrt(var / n);

  if (track_nodes && nodes.size() > 1) {
    // eta-sampling error: spread of the per-node estimates. Common random
    // numbers cancel most of the shared W noise inside the spread.
    const double j = static_cast<double>(nodes.size());
    double m1 = 0.0, m2 = 0.0;
    for (double s : node_sums) {
      const double p = s / n;
      m1 += p;
      m2 += p * p;
    }
    m1 /= j;
    m2 /= j;
    const double between = std::max(0.0, m2 - m1 * m1);
    se = std::sqrt(se * se + between / j);
  }

  EstimateWithCI est;
  est.point = mean;
  est.std_error = se;
  est.n = budget;
  est.seed = seed;
  est.meta = (tilt ? "tilted " : "plain-mc ") + meta_prefix;
  return est;
}

}  // namespace

EstimateWithCI tail_probability(const CovarianceModel& model, const Eigen::VectorXd& b,
                                std::int64_t budget, std::uint64_t seed, TailStrategy strategy) {
  if (b.size() != model.dim()) throw DimensionMismatch("tail_probability: barrier dimension");
  if (budget < 1000) throw DomainError("tail_probability: budget must be >= 1000");
  std::vector<Node> nodes{{b, 1.0}};
  return run_engine(model, nodes, false, budget, seed, strategy, b, "nodes=1");
}

EstimateWithCI tail_term(const CovarianceModel& model, const Eigen::VectorXd& b,
                         const TrendDistribution& trend, std::int64_t budget, int n_eta,
                         std::uint64_t seed, TailStrategy strategy) {
  if (b.size() != model.dim() || trend.dim() != model.dim()) {
    throw DimensionMismatch("tail_term: dimension mismatch");
  }
  if (budget < 1000) throw DomainError("tail_term: budget must be >= 1000");

  std::vector<Node> nodes;
  bool eta_mc = false;
  if (auto atoms = trend.atoms(1024)) {
    nodes.reserve(atoms->size());
    for (auto& [v, p] : *atoms) {
      if (p > 0.0) nodes.push_back({b + v, p});
    }
  } else {
    if (n_eta < 1) throw DomainError("tail_term: n_eta must be >= 1 for eta Monte Carlo");
    eta_mc = true;
    const Eigen::MatrixXd draws = trend.sample(n_eta, seed, rng::StreamTag::tail_eta);
    nodes.reserve(n_eta);
    const double w = 1.0 / static_cast<double>(n_eta);
    for (int k = 0; k < n_eta; ++k) {
      nodes.push_back({b + draws.row(k).transpose(), w});
    }
  }

  const Eigen::VectorXd center = b + trend.mean();
  const std::string meta = eta_mc ? "eta-mc=" + std::to_string(nodes.size())
                                  : "atoms=" + std::to_string(nodes.size());
  return run_engine(model, nodes, eta_mc, budget, seed, strategy, center, meta);
}

}  // namespace brisk
