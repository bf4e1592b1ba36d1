#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "brisk/rng.hpp"

namespace brisk {

// The law of the bounded random trend eta: point mass, independent
// per-component Bernoulli on {0, value}, uniform on a box, or a finite
// set of atoms. Support is contained in [lower_bound, upper_bound].
class TrendDistribution {
 public:
  enum class Kind { point_mass, bernoulli, uniform_box, discrete };

  static TrendDistribution point_mass(Eigen::VectorXd c);
  static TrendDistribution bernoulli(Eigen::VectorXd p);
  static TrendDistribution uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static TrendDistribution discrete(std::vector<std::pair<Eigen::VectorXd, double>> atoms);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& lower_bound() const { return k1_; }  // K1
  const Eigen::VectorXd& upper_bound() const { return k2_; }  // K2

  // Law of s * eta (s > 0); used by the T-to-1 self-similarity rescaling.
  TrendDistribution scaled(double s) const;

  // Enumerated support with probabilities when it has at most `cap`
  // atoms (point mass, Bernoulli with 2^d <= cap, discrete); nullopt for
  // uniform boxes.
  std::optional<std::vector<std::pair<Eigen::VectorXd, double>>> atoms(std::size_t cap = 1024) const;

  Eigen::VectorXd mean() const;

  // n i.i.d. draws, one per row; deterministic given (seed, tag, chunking).
  Eigen::MatrixXd sample(std::int64_t n, std::uint64_t seed,
                         rng::StreamTag tag = rng::StreamTag::trend_draw) const;

  // Draws one realization from an already-open stream; consumes a fixed
  // number of uniforms per call so replications stay aligned.
  void draw_into(rng::Stream& stream, Eigen::VectorXd& out) const;

  // Empty until assigned from one of the factories.
  TrendDistribution() = default;

  // Bernoulli upper value (1 unless rescaled).
  double bernoulli_value() const { return bernoulli_value_; }
  const Eigen::VectorXd& bernoulli_p() const { return p_; }

 private:
  void set_bounds();

  Kind kind_ = Kind::point_mass;
  int dim_ = 0;
  Eigen::VectorXd c_;        // point mass
  Eigen::VectorXd p_;        // bernoulli probabilities
  double bernoulli_value_ = 1.0;
  Eigen::VectorXd lo_, hi_;  // uniform box
  std::vector<std::pair<Eigen::VectorXd, double>> atoms_;
  Eigen::VectorXd k1_, k2_;
};

// Public operation form of TrendDistribution::sample.
Eigen::MatrixXd sample_trend(const TrendDistribution& trend, std::int64_t n, std::uint64_t seed);

}  // namespace brisk
