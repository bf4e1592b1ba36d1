#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "brisk/covariance.hpp"
#include "brisk/estimate.hpp"
#include "brisk/trend.hpp"

namespace brisk {

enum class TailStrategy { automatic, plain, tilted };

// P(W(1) > b componentwise). Plain Monte Carlo when every standardized
// component b_i / sqrt(Sigma_ii) is <= 2; otherwise importance sampling
// with the mean exponentially tilted to the quadratic-program optimizer
// of b. The strategy used is recorded in meta.
EstimateWithCI tail_probability(const CovarianceModel& model, const Eigen::VectorXd& b,
                                std::int64_t budget, std::uint64_t seed,
                                TailStrategy strategy = TailStrategy::automatic);

// E_eta[ P(W(1) > b + eta) ]. Finite trends with at most 1024 atoms are
// summed in closed form against one common sample batch; uniform-box
// trends use n_eta Monte Carlo draws of eta with common random numbers
// against the W samples. A point-mass-at-zero trend reproduces
// tail_probability(model, b, budget, seed) exactly.
EstimateWithCI tail_term(const CovarianceModel& model, const Eigen::VectorXd& b,
                         const TrendDistribution& trend, std::int64_t budget, int n_eta,
                         std::uint64_t seed, TailStrategy strategy = TailStrategy::automatic);

}  // namespace brisk
