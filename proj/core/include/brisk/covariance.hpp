#pragma once

#include <Eigen/Dense>

namespace brisk {

// Static geometry of the risk vector W(t) = A B(t): the mixing matrix A,
// the covariance Sigma = A A^T with its Cholesky factor, and the inverse.
// Construction fails rather than returning a near-singular model.
class CovarianceModel {
 public:
  static CovarianceModel from_mixing(const Eigen::MatrixXd& mixing);
  static CovarianceModel from_covariance(const Eigen::MatrixXd& sigma);
  // Unit diagonal, constant off-diagonal rho in (-1/(d-1), 1).
  static CovarianceModel equicorrelated(int dim, double rho);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& mixing() const { return mixing_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& sigma_inv() const { return sigma_inv_; }
  // Lower-triangular L with Sigma = L L^T.
  const Eigen::MatrixXd& chol() const { return chol_; }
  double log_det_sigma() const { return log_det_sigma_; }

  // Solves Sigma x = b through the Cholesky factor.
  Eigen::VectorXd solve_sigma(const Eigen::VectorXd& b) const;

  // Empty until assigned from one of the factories.
  CovarianceModel() = default;

 private:
  void finalize();

  Eigen::MatrixXd mixing_, sigma_, sigma_inv_, chol_;
  double log_det_sigma_ = 0.0;
};

// A centered Gaussian vector with an optional mean shift, sharing the
// covariance geometry of a model.
struct GaussianVector {
  const CovarianceModel* model = nullptr;
  Eigen::VectorXd mean_shift;

  GaussianVector(const CovarianceModel& m, Eigen::VectorXd shift);
  explicit GaussianVector(const CovarianceModel& m);
};

// Lower-triangular Cholesky with an explicit pivot threshold
// (pivot > 1e-12 * max diagonal); throws SingularMatrix on failure.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sym);

}  // namespace brisk
