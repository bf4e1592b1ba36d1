#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace brisk::test {

// Random SPD covariance via A A^T + eps I, reproducible from the seed.
inline Eigen::MatrixXd random_spd(int d, std::mt19937_64& gen, double ridge = 0.05) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = normal(gen);
  Eigen::MatrixXd sigma = a * a.transpose() + ridge * Eigen::MatrixXd::Identity(d, d);
  return ((sigma + sigma.transpose()) / 2.0).eval();
}

inline Eigen::VectorXd random_barrier(int d, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  Eigen::VectorXd a(d);
  for (;;) {
    for (int i = 0; i < d; ++i) a[i] = uni(gen);
    if ((a.array() > 0.0).any()) return a;
  }
}

inline bool close_rel(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace brisk::test
