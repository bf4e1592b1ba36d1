#include "brisk/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "brisk/errors.hpp"
#include "brisk/rng.hpp"

namespace brisk {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr std::int64_t kSampleChunk = 4096;
}  // namespace

double univariate_phi(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double univariate_phibar(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double erfcx_pos(double t) {
  if (t < 26.0) {
    // erfc(t) stays normal here and exp(t^2) does not overflow.
    return std::exp(t * t) * std::erfc(t);
  }
  // Asymptotic series 1/(t sqrt(pi)) * sum (-1)^k (2k-1)!! / (2t^2)^k.
  const double q = 1.0 / (2.0 * t * t);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -q * (2 * k - 1);
    sum += term;
  }
  return sum / (t * std::sqrt(std::numbers::pi));
}

double log_phi(double x) {
  if (x > -8.0) return std::log(univariate_phi(x));
  const double t = -x * kInvSqrt2;
  return std::log(0.5 * erfcx_pos(t)) - 0.5 * x * x;
}

double log_density(const CovarianceModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw DimensionMismatch("density: x dimension mismatch");
  const Eigen::VectorXd y = model.chol().triangularView<Eigen::Lower>().solve(x);
  return -0.5 * (model.dim() * kLog2Pi + model.log_det_sigma() + y.squaredNorm());
}

double density(const CovarianceModel& model, const Eigen::VectorXd& x) {
  return std::exp(log_density(model, x));
}

double log_density(const GaussianVector& g, const Eigen::VectorXd& x) {
  return log_density(*g.model, x - g.mean_shift);
}

double density(const GaussianVector& g, const Eigen::VectorXd& x) {
  return std::exp(log_density(g, x));
}

Eigen::MatrixXd sample(const CovarianceModel& model, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be >= 1");
  const int d = model.dim();
  Eigen::MatrixXd out(n, d);
  const Eigen::MatrixXd& l = model.chol();
  const std::uint64_t n_chunks = (static_cast<std::uint64_t>(n) + kSampleChunk - 1) / kSampleChunk;
  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::NormalSource normals(seed, rng::StreamTag::gaussian_sample, chunk);
    const std::int64_t row0 = static_cast<std::int64_t>(chunk) * kSampleChunk;
    const std::int64_t row1 = std::min<std::int64_t>(row0 + kSampleChunk, n);
    Eigen::VectorXd z(d);
    for (std::int64_t r = row0; r < row1; ++r) {
      for (int i = 0; i < d; ++i) z[i] = normals();
      for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int k = 0; k <= i; ++k) acc += l(i, k) * z[k];
        out(r, i) = acc;
      }
    }
  });
  return out;
}

}  // namespace brisk
