#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "brisk/covariance.hpp"
#include "brisk/trend.hpp"

namespace brisk {

// The unit of work shared by the simulator, the asymptotic evaluator and
// the CLI: model geometry, barrier direction, trend law, horizon, capital
// level and sampling budgets.
struct RuinScenario {
  CovarianceModel model;
  Eigen::VectorXd barrier;   // a, at least one strictly positive component
  TrendDistribution trend;
  double horizon = 1.0;      // T
  double level = 1.0;        // u
  int n_steps = 1024;        // grid points per unit time
  std::int64_t n_paths = 100000;
  std::uint64_t master_seed = 0;

  void validate() const;
};

}  // namespace brisk
