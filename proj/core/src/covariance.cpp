#include "brisk/covariance.hpp"

#include <cmath>

#include "brisk/errors.hpp"

namespace brisk {

namespace {
constexpr double kPivotTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kInverseTol = 1e-8;
}  // namespace

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sym) {
  const auto n = sym.rows();
  const double max_diag = sym.diagonal().maxCoeff();
  const double threshold = kPivotTol * max_diag;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double sum = sym(i, j);
      for (Eigen::Index k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(sum > threshold)) {
          throw SingularMatrix("covariance is not positive definite: pivot " +
                               std::to_string(sum) + " at index " + std::to_string(i));
        }
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

CovarianceModel CovarianceModel::from_mixing(const Eigen::MatrixXd& mixing) {
  if (mixing.rows() != mixing.cols() || mixing.rows() < 1) {
    throw DimensionMismatch("mixing matrix must be square, got " +
                            std::to_string(mixing.rows()) + "x" + std::to_string(mixing.cols()));
  }
  if (!mixing.allFinite()) throw DomainError("mixing matrix has non-finite entries");
  CovarianceModel m;
  m.mixing_ = mixing;
  m.sigma_ = mixing * mixing.transpose();
  // A A^T is symmetric only up to rounding; fold it exactly.
  m.sigma_ = ((m.sigma_ + m.sigma_.transpose()) / 2.0).eval();
  m.finalize();
  return m;
}

CovarianceModel CovarianceModel::from_covariance(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw DimensionMismatch("covariance matrix must be square");
  }
  if (!sigma.allFinite()) throw DomainError("covariance matrix has non-finite entries");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw DomainError("covariance matrix is not symmetric within 1e-12");
  }
  CovarianceModel m;
  m.sigma_ = ((sigma + sigma.transpose()) / 2.0).eval();
  m.finalize();
  m.mixing_ = m.chol_;  // any A with A A^T = Sigma serves as mixing
  return m;
}

CovarianceModel CovarianceModel::equicorrelated(int dim, double rho) {
  if (dim < 2) throw DimensionMismatch("equicorrelated model needs dim >= 2");
  if (!(rho > -1.0 / (dim - 1) && rho < 1.0)) {
    throw RhoOutOfRange("rho " + std::to_string(rho) + " outside (-1/(d-1), 1) for d=" +
                        std::to_string(dim));
  }
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(dim, dim, rho);
  sigma.diagonal().setOnes();
  return from_covariance(sigma);
}

void CovarianceModel::finalize() {
  chol_ = cholesky_lower(sigma_);
  const auto n = sigma_.rows();
  // Sigma^{-1} = L^{-T} L^{-1}
  Eigen::MatrixXd inv_l = chol_.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  sigma_inv_ = inv_l.transpose() * inv_l;
  sigma_inv_ = ((sigma_inv_ + sigma_inv_.transpose()) / 2.0).eval();
  const double residual = (sigma_ * sigma_inv_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual <= kInverseTol)) {
    throw SingularMatrix("covariance inverse residual " + std::to_string(residual) +
                         " exceeds 1e-8; model too ill-conditioned");
  }
  log_det_sigma_ = 2.0 * chol_.diagonal().array().log().sum();
}

Eigen::VectorXd CovarianceModel::solve_sigma(const Eigen::VectorXd& b) const {
  Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(b);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

GaussianVector::GaussianVector(const CovarianceModel& m, Eigen::VectorXd shift)
    : model(&m), mean_shift(std::move(shift)) {
  if (mean_shift.size() != m.dim()) throw DimensionMismatch("mean shift dimension mismatch");
  if (!mean_shift.allFinite()) throw DomainError("mean shift has non-finite entries");
}

GaussianVector::GaussianVector(const CovarianceModel& m)
    : model(&m), mean_shift(Eigen::VectorXd::Zero(m.dim())) {}

}  // namespace brisk
