#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "brisk/asymptotics.hpp"
#include "brisk/covariance.hpp"
#include "brisk/scenario.hpp"
#include "brisk/trend.hpp"

namespace brisk::cli {

// Parsed scenario document (schema v1). Parsing is strict: unknown keys
// anywhere in the document are rejected, numbers must be finite, levels
// strictly positive and strictly increasing.
struct ScenarioFile {
  CovarianceModel model;
  std::optional<EquicorrSpec> equicorr;  // set when the model came as {"equicorr": ...}
  Eigen::VectorXd barrier;
  TrendDistribution trend;
  double horizon = 1.0;
  std::vector<double> levels;
  int n_steps = 0;
  std::int64_t n_paths = 0;
  std::int64_t tail_budget = 0;
  std::int64_t ia_paths = 0;
  double ia_lambda = 0.0;
  std::uint64_t master_seed = 0;

  nlohmann::json canonical;  // effective document (after CLI overrides)

  RuinScenario scenario_for_level(double u) const;
  AsymptoticBudgets budgets() const;
};

struct Overrides {
  std::optional<std::vector<double>> levels;
  std::optional<std::uint64_t> seed;
};

ScenarioFile load_scenario(const std::string& path, const Overrides& overrides);

// FNV-1a digest of the canonical serialization; stable under key
// reordering and whitespace changes of the input file.
std::string scenario_hash(const nlohmann::json& canonical);

// Cache key for I_a results: covariance, rescaled barrier, horizon and
// the I_a budgets only (I_a does not depend on u or the trend).
std::string ia_cache_key(const ScenarioFile& sc, int ia_steps);

}  // namespace brisk::cli
