#include "brisk/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "brisk/errors.hpp"
#include "brisk/rng.hpp"

namespace brisk {

namespace {

constexpr std::int64_t kChunk = 4096;  // replications per chunk

struct BinomialCounts {
  std::int64_t successes = 0;
  std::int64_t n = 0;
};

EstimateWithCI to_estimate(const BinomialCounts& counts, std::uint64_t seed, std::string meta) {
  EstimateWithCI est;
  const double n = static_cast<double>(counts.n);
  const double p = static_cast<double>(counts.successes) / n;
  est.point = p;
  est.std_error = std::sqrt(p * (1.0 - p) / n);
  est.n = counts.n;
  est.seed = seed;
  est.meta = std::move(meta);
  return est;
}

// Walks every replication of the scenario once; the visitor receives the
// replication's trend draw and a step callback with (k, w pointer). Path
// normals are consumed in fixed-size blocks so the stream position never
// depends on scoring outcomes, which keeps path sets shared between
// operations with the same scenario.
template <typename PerReplication>
void walk_paths(const RuinScenario& scenario, std::int64_t n_steps_total, int steps_per_unit,
                const PerReplication& visit) {
  const int d = scenario.model.dim();
  const double sqrt_dt = std::sqrt(1.0 / static_cast<double>(steps_per_unit));
  std::vector<double> lmat(static_cast<std::size_t>(d) * d, 0.0);  // row-major lower factor
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) lmat[i * d + j] = scenario.model.chol()(i, j) * sqrt_dt;
  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(scenario.n_paths) + kChunk - 1) / kChunk;

  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::NormalSource normals(scenario.master_seed, rng::StreamTag::sim_path, chunk);
    rng::Stream trend_stream(scenario.master_seed, rng::StreamTag::sim_trend, chunk);
    const std::int64_t r0 = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t r1 = std::min<std::int64_t>(r0 + kChunk, scenario.n_paths);
    Eigen::VectorXd eta(d);
    std::vector<double> w(d);
    std::vector<double> zbuf(static_cast<std::size_t>(n_steps_total) * d);
    const double* lp = lmat.data();
    for (std::int64_t r = r0; r < r1; ++r) {
      scenario.trend.draw_into(trend_stream, eta);
      normals.fill(zbuf);
      std::fill(w.begin(), w.end(), 0.0);
      visit(chunk, r, eta, [&](auto&& per_step) {
        const double* zp = zbuf.data();
        if (d == 1) {
          const double scale = lp[0];
          double w0 = 0.0;
          for (std::int64_t k = 1; k <= n_steps_total; ++k) {
            w0 += scale * *zp++;
            w[0] = w0;
            if (!per_step(k, w.data())) return;
          }
          return;
        }
        if (d == 2) {
          const double l00 = lp[0], l10 = lp[2], l11 = lp[3];
          double w0 = 0.0, w1 = 0.0;
          for (std::int64_t k = 1; k <= n_steps_total; ++k) {
            const double z0 = zp[0], z1 = zp[1];
            zp += 2;
            w0 += l00 * z0;
            w1 += l10 * z0 + l11 * z1;
            w[0] = w0;
            w[1] = w1;
            if (!per_step(k, w.data())) return;
          }
          return;
        }
        for (std::int64_t k = 1; k <= n_steps_total; ++k) {
          for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += lp[i * d + j] * zp[j];
            w[i] += acc;
          }
          zp += d;
          if (!per_step(k, w.data())) return;
        }
      });
    }
  });
}

}  // namespace

void RuinScenario::validate() const {
  if (barrier.size() != model.dim()) throw InvalidScenario("barrier dimension mismatch");
  if (!barrier.allFinite()) throw InvalidScenario("barrier has non-finite entries");
  if ((barrier.array() <= 0.0).all()) {
    throw InvalidScenario("barrier must have at least one strictly positive component");
  }
  if (trend.dim() != model.dim()) throw InvalidScenario("trend dimension mismatch");
  if (!(horizon > 0.0)) throw InvalidScenario("horizon must be positive");
  if (!(level > 0.0)) throw InvalidScenario("level u must be positive");
  if (n_steps < 64) throw InvalidScenario("n_steps must be >= 64");
  if (n_paths < 100) throw InvalidScenario("n_paths must be >= 100");
}

EstimateWithCI simulate_ruin(const RuinScenario& scenario) {
  scenario.validate();
  const std::int64_t n_steps_total = std::llround(scenario.horizon * scenario.n_steps);
  const Eigen::VectorXd target = scenario.barrier * scenario.level;
  const double dt = 1.0 / scenario.n_steps;
  const int d = scenario.model.dim();

  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(scenario.n_paths) + kChunk - 1) / kChunk;
  std::vector<std::int64_t> hits(n_chunks, 0);

  walk_paths(scenario, n_steps_total, scenario.n_steps,
             [&](std::uint64_t chunk, std::int64_t, const Eigen::VectorXd& eta, auto&& run) {
               bool ruined = false;
               run([&](std::int64_t k, const double* w) {
                 const double t = static_cast<double>(k) * dt;
                 bool above = true;
                 for (int i = 0; i < d && above; ++i) above = w[i] - eta[i] * t > target[i];
                 if (above) {
                   ruined = true;
                   return false;  // crossing found; remaining normals already consumed
                 }
                 return true;
               });
               if (ruined) ++hits[chunk];
             });

  BinomialCounts counts;
  counts.n = scenario.n_paths;
  for (std::int64_t h : hits) counts.successes += h;
  return to_estimate(counts, scenario.master_seed,
                     "simulate-ruin steps/unit=" + std::to_string(scenario.n_steps));
}

std::pair<EstimateWithCI, EstimateWithCI> simulate_split(const RuinScenario& scenario,
                                                         double lambda_horizon) {
  scenario.validate();
  if (scenario.horizon != 1.0) {
    throw InvalidScenario("simulate_split expects the horizon normalized to T=1");
  }
  if (!(lambda_horizon > 0.0)) throw DomainError("simulate_split: Lambda must be positive");
  const double u = scenario.level;
  if (!(lambda_horizon < u * u)) {
    throw HorizonTooLarge("simulate_split needs Lambda < u^2 so delta = 1 - Lambda/u^2 > 0");
  }
  const double delta = 1.0 - lambda_horizon / (u * u);
  const std::int64_t n_steps_total = std::llround(scenario.horizon * scenario.n_steps);
  const Eigen::VectorXd target = scenario.barrier * scenario.level;
  const double dt = 1.0 / scenario.n_steps;
  const int d = scenario.model.dim();

  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(scenario.n_paths) + kChunk - 1) / kChunk;
  std::vector<std::int64_t> early_hits(n_chunks, 0), late_hits(n_chunks, 0);

  walk_paths(scenario, n_steps_total, scenario.n_steps,
             [&](std::uint64_t chunk, std::int64_t, const Eigen::VectorXd& eta, auto&& run) {
               bool early = false, late = false;
               run([&](std::int64_t k, const double* w) {
                 const double t = static_cast<double>(k) * dt;
                 bool above = true;
                 for (int i = 0; i < d && above; ++i) above = w[i] - eta[i] * t > target[i];
                 if (above) {
                   // the boundary point belongs to both windows
                   if (t <= delta) early = true;
                   if (t >= delta) late = true;
                 }
                 return !(early && late);
               });
               if (early) ++early_hits[chunk];
               if (late) ++late_hits[chunk];
             });

  BinomialCounts m_counts, big_m_counts;
  m_counts.n = big_m_counts.n = scenario.n_paths;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    m_counts.successes += early_hits[c];
    big_m_counts.successes += late_hits[c];
  }
  const std::string tag = " Lambda=" + std::to_string(lambda_horizon);
  return {to_estimate(m_counts, scenario.master_seed, "split-early" + tag),
          to_estimate(big_m_counts, scenario.master_seed, "split-late" + tag)};
}

std::vector<SweepRow> convergence_sweep(const RuinScenario& scenario,
                                        const std::vector<int>& step_schedule) {
  scenario.validate();
  if (step_schedule.size() < 3) throw ScheduleInvalid("schedule needs at least 3 entries");
  for (std::size_t i = 1; i < step_schedule.size(); ++i) {
    if (step_schedule[i] <= step_schedule[i - 1]) {
      throw ScheduleInvalid("schedule must be strictly increasing");
    }
  }
  if (step_schedule.front() < 64) throw ScheduleInvalid("schedule entries must be >= 64");
  const int finest = step_schedule.back();
  for (int s : step_schedule) {
    if (finest % s != 0) {
      throw ScheduleInvalid("every schedule entry must divide the finest grid (" +
                            std::to_string(s) + " does not divide " + std::to_string(finest) +
                            "); subsampling needs aligned grids");
    }
  }

  const std::size_t n_rows = step_schedule.size();
  const std::int64_t n_steps_total = std::llround(scenario.horizon * finest);
  const Eigen::VectorXd target = scenario.barrier * scenario.level;
  const double dt = 1.0 / finest;
  const int d = scenario.model.dim();
  std::vector<std::int64_t> stride(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) stride[r] = finest / step_schedule[r];

  RuinScenario finest_scenario = scenario;
  finest_scenario.n_steps = finest;

  const std::uint64_t n_chunks =
      (static_cast<std::uint64_t>(scenario.n_paths) + kChunk - 1) / kChunk;
  std::vector<std::vector<std::int64_t>> hits(n_chunks, std::vector<std::int64_t>(n_rows, 0));

  walk_paths(finest_scenario, n_steps_total, finest,
             [&](std::uint64_t chunk, std::int64_t, const Eigen::VectorXd& eta, auto&& run) {
               // A crossing seen by a coarse grid is seen by every finer
               // one, so scoring per row is a divisibility test.
               std::vector<bool> ruined(n_rows, false);
               std::size_t pending = n_rows;
               run([&](std::int64_t k, const double* w) {
                 const double t = static_cast<double>(k) * dt;
                 bool above = true;
                 for (int i = 0; i < d && above; ++i) above = w[i] - eta[i] * t > target[i];
                 if (above) {
                   for (std::size_t r = 0; r < n_rows; ++r) {
                     if (!ruined[r] && k % stride[r] == 0) {
                       ruined[r] = true;
                       --pending;
                     }
                   }
                 }
                 return pending > 0;
               });
               for (std::size_t r = 0; r < n_rows; ++r) {
                 if (ruined[r]) ++hits[chunk][r];
               }
             });

  std::vector<SweepRow> rows(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    BinomialCounts counts;
    counts.n = scenario.n_paths;
    for (std::uint64_t c = 0; c < n_chunks; ++c) counts.successes += hits[c][r];
    const EstimateWithCI est = to_estimate(counts, scenario.master_seed, "sweep");
    rows[r].n_steps = step_schedule[r];
    rows[r].estimate = est.point;
    rows[r].std_error = est.std_error;
  }
  return rows;
}

}  // namespace brisk
