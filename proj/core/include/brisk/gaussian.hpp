#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "brisk/covariance.hpp"

namespace brisk {

// Standard normal CDF and complementary CDF via erfc; relative error
// ~1e-14 for |x| <= 8, absolute error below 1e-300 in the far tails.
double univariate_phi(double x);
double univariate_phibar(double x);

// log Phi(x), stable for arbitrarily negative x (scaled-erfc branch).
double log_phi(double x);

// Scaled complementary error function e^{t^2} erfc(t) for t >= 0.
double erfcx_pos(double t);

// Density of N(0, Sigma) at x; evaluated in log space and exponentiated.
double density(const CovarianceModel& model, const Eigen::VectorXd& x);
double log_density(const CovarianceModel& model, const Eigen::VectorXd& x);
double density(const GaussianVector& g, const Eigen::VectorXd& x);
double log_density(const GaussianVector& g, const Eigen::VectorXd& x);

// n i.i.d. draws from N(0, Sigma), one per row; bit-identical for a given
// (model, n, seed) regardless of worker count.
Eigen::MatrixXd sample(const CovarianceModel& model, std::int64_t n, std::uint64_t seed);

}  // namespace brisk
