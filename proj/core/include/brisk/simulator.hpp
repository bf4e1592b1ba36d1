#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "brisk/estimate.hpp"
#include "brisk/scenario.hpp"

namespace brisk {

// Direct Monte Carlo estimate of the simultaneous ruin probability
// psi_T(a u) = P(exists t in [0,T]: W(t) - eta t > a u componentwise).
// Deterministic given master_seed and independent of worker count.
EstimateWithCI simulate_ruin(const RuinScenario& scenario);

// Early/late window decomposition at delta = 1 - Lambda/u^2 (horizon
// normalized to 1): one path set scored twice, crossings in [0, delta]
// feed the m estimate and crossings in [delta, 1] the M estimate. The
// paths coincide with simulate_ruin's for the same scenario, so
// m <= psi <= m + M holds path by path, not just in expectation.
std::pair<EstimateWithCI, EstimateWithCI> simulate_split(const RuinScenario& scenario,
                                                         double lambda_horizon);

struct SweepRow {
  int n_steps = 0;
  double estimate = 0.0;
  double std_error = 0.0;
};

// Discretization-bias audit: the finest path is generated once per
// replication and coarser grids are subsampled from it, so the ruin
// indicator is non-decreasing in refinement and the estimates are
// monotone exactly. Every schedule entry must divide the finest one.
std::vector<SweepRow> convergence_sweep(const RuinScenario& scenario,
                                        const std::vector<int>& step_schedule);

}  // namespace brisk
