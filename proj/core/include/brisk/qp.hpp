#pragma once

#include <vector>

#include <Eigen/Dense>

#include "brisk/covariance.hpp"

namespace brisk {

// Solution of the quadratic program "minimize x^T Sigma^{-1} x subject to
// x >= a". Indices are 0-based. lambda = Sigma^{-1} a_tilde is positive on
// the active set and exactly zero on its complement; weak_set collects the
// complement coordinates that sit on the constraint boundary.
struct QpSolution {
  Eigen::VectorXd a_tilde;
  std::vector<int> active_set;   // I, sorted
  std::vector<int> complement;   // J = I^c, sorted
  std::vector<int> weak_set;     // U = { j in J : a_tilde_j = a_j }
  Eigen::VectorXd lambda;
  double objective = 0.0;

  Eigen::VectorXd lambda_active() const;
  Eigen::VectorXd barrier_active() const;  // a_I (= a_tilde on I)
  double lambda_product() const;           // prod_{i in I} lambda_i
};

// Activity/positivity tolerance for the KKT tests (relative).
struct QpTolerances {
  double activity = 1e-10;
};

// Exhaustive index-set enumeration with KKT verification; exactly one
// candidate set passes both converse conditions. Requires at least one
// strictly positive barrier component and d <= 20.
QpSolution solve_qp(const CovarianceModel& model, const Eigen::VectorXd& a,
                    const QpTolerances& tol = {});

// Independent oracle for tests: grid seeding over [a, a+5] followed by
// projected gradient descent; d <= 3, grid >= 100 points per axis.
Eigen::VectorXd solve_qp_bruteforce(const CovarianceModel& model, const Eigen::VectorXd& a,
                                    int grid);

// Equicorrelated model: unit diagonal, common off-diagonal rho.
struct EquicorrSpec {
  int dim;
  double rho;
  Eigen::VectorXd barrier;

  EquicorrSpec(int d, double r, Eigen::VectorXd a);
  CovarianceModel model() const;
};

// Closed-form Sigma^{-1} plus an active-set search over the upper order
// statistics of the sorted barrier; falls back to generic enumeration if
// no sorted prefix passes the KKT check.
QpSolution solve_equicorrelated(const EquicorrSpec& spec, const QpTolerances& tol = {});

// Whether |I| = d for a descending-sorted barrier. `kkt` is the
// authoritative componentwise Sigma^{-1} a > 0 test; `printed_inequality`
// evaluates a_d > sum(a)/(1+rho(d-1)), reported for comparison only (the
// two disagree for equal barrier components).
struct FullIndexCheck {
  bool kkt = false;
  bool printed_inequality = false;
};
FullIndexCheck full_index_condition(const EquicorrSpec& spec);

}  // namespace brisk
