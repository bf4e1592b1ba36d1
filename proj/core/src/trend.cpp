#include "brisk/trend.hpp"

#include <cmath>

#include "brisk/errors.hpp"

namespace brisk {

namespace {
constexpr std::int64_t kChunk = 4096;
}

TrendDistribution TrendDistribution::point_mass(Eigen::VectorXd c) {
  if (c.size() < 1 || !c.allFinite()) throw InvalidScenario("point-mass trend must be finite");
  TrendDistribution t;
  t.kind_ = Kind::point_mass;
  t.dim_ = static_cast<int>(c.size());
  t.c_ = std::move(c);
  t.set_bounds();
  return t;
}

TrendDistribution TrendDistribution::bernoulli(Eigen::VectorXd p) {
  if (p.size() < 1 || !p.allFinite() || (p.array() < 0.0).any() || (p.array() > 1.0).any()) {
    throw InvalidScenario("Bernoulli trend probabilities must lie in [0,1]");
  }
  TrendDistribution t;
  t.kind_ = Kind::bernoulli;
  t.dim_ = static_cast<int>(p.size());
  t.p_ = std::move(p);
  t.set_bounds();
  return t;
}

TrendDistribution TrendDistribution::uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() < 1 || !lo.allFinite() || !hi.allFinite()) {
    throw InvalidScenario("uniform-box trend bounds must be finite and matching");
  }
  if ((lo.array() > hi.array()).any()) throw InvalidScenario("uniform box requires lo <= hi");
  TrendDistribution t;
  t.kind_ = Kind::uniform_box;
  t.dim_ = static_cast<int>(lo.size());
  t.lo_ = std::move(lo);
  t.hi_ = std::move(hi);
  t.set_bounds();
  return t;
}

TrendDistribution TrendDistribution::discrete(
    std::vector<std::pair<Eigen::VectorXd, double>> atoms) {
  if (atoms.empty()) throw InvalidScenario("discrete trend needs at least one atom");
  const auto d = atoms.front().first.size();
  double total = 0.0;
  for (const auto& [v, p] : atoms) {
    if (v.size() != d || !v.allFinite()) throw InvalidScenario("discrete atom dimension mismatch");
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidScenario("discrete atom probability invalid");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidScenario("discrete atom probabilities must sum to 1 within 1e-12");
  }
  TrendDistribution t;
  t.kind_ = Kind::discrete;
  t.dim_ = static_cast<int>(d);
  t.atoms_ = std::move(atoms);
  t.set_bounds();
  return t;
}

void TrendDistribution::set_bounds() {
  switch (kind_) {
    case Kind::point_mass:
      k1_ = c_;
      k2_ = c_;
      break;
    case Kind::bernoulli:
      k1_ = Eigen::VectorXd::Constant(dim_, std::min(0.0, bernoulli_value_));
      k2_ = Eigen::VectorXd::Constant(dim_, std::max(0.0, bernoulli_value_));
      break;
    case Kind::uniform_box:
      k1_ = lo_;
      k2_ = hi_;
      break;
    case Kind::discrete: {
      k1_ = atoms_.front().first;
      k2_ = atoms_.front().first;
      for (const auto& [v, p] : atoms_) {
        k1_ = k1_.cwiseMin(v);
        k2_ = k2_.cwiseMax(v);
      }
      break;
    }
  }
}

TrendDistribution TrendDistribution::scaled(double s) const {
  if (!(s > 0.0)) throw DomainError("trend scale must be positive");
  TrendDistribution t = *this;
  switch (kind_) {
    case Kind::point_mass:
      t.c_ *= s;
      break;
    case Kind::bernoulli:
      t.bernoulli_value_ *= s;
      break;
    case Kind::uniform_box:
      t.lo_ *= s;
      t.hi_ *= s;
      break;
    case Kind::discrete:
      for (auto& [v, p] : t.atoms_) v *= s;
      break;
  }
  t.set_bounds();
  return t;
}

std::optional<std::vector<std::pair<Eigen::VectorXd, double>>> TrendDistribution::atoms(
    std::size_t cap) const {
  switch (kind_) {
    case Kind::point_mass:
      return std::vector<std::pair<Eigen::VectorXd, double>>{{c_, 1.0}};
    case Kind::discrete:
      if (atoms_.size() > cap) return std::nullopt;
      return atoms_;
    case Kind::bernoulli: {
      if (dim_ > 60 || (std::size_t{1} << dim_) > cap) return std::nullopt;
      std::vector<std::pair<Eigen::VectorXd, double>> out;
      out.reserve(std::size_t{1} << dim_);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim_); ++mask) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
        double prob = 1.0;
        for (int i = 0; i < dim_; ++i) {
          if (mask & (std::uint64_t{1} << i)) {
            v[i] = bernoulli_value_;
            prob *= p_[i];
          } else {
            prob *= 1.0 - p_[i];
          }
        }
        out.emplace_back(std::move(v), prob);
      }
      return out;
    }
    case Kind::uniform_box:
      return std::nullopt;
  }
  return std::nullopt;
}

Eigen::VectorXd TrendDistribution::mean() const {
  switch (kind_) {
    case Kind::point_mass:
      return c_;
    case Kind::bernoulli:
      return p_ * bernoulli_value_;
    case Kind::uniform_box:
      return (lo_ + hi_) / 2.0;
    case Kind::discrete: {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
      for (const auto& [v, p] : atoms_) m += p * v;
      return m;
    }
  }
  return Eigen::VectorXd::Zero(dim_);
}

void TrendDistribution::draw_into(rng::Stream& stream, Eigen::VectorXd& out) const {
  out.resize(dim_);
  switch (kind_) {
    case Kind::point_mass:
      out = c_;
      break;
    case Kind::bernoulli:
      for (int i = 0; i < dim_; ++i) {
        out[i] = stream.next_double() < p_[i] ? bernoulli_value_ : 0.0;
      }
      break;
    case Kind::uniform_box:
      for (int i = 0; i < dim_; ++i) {
        out[i] = lo_[i] + (hi_[i] - lo_[i]) * stream.next_double();
      }
      break;
    case Kind::discrete: {
      const double u = stream.next_double();
      double cdf = 0.0;
      std::size_t pick = atoms_.size() - 1;
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        cdf += atoms_[k].second;
        if (u < cdf) {
          pick = k;
          break;
        }
      }
      out = atoms_[pick].first;
      break;
    }
  }
}

Eigen::MatrixXd TrendDistribution::sample(std::int64_t n, std::uint64_t seed,
                                          rng::StreamTag tag) const {
  if (n < 1) throw DomainError("sample_trend: n must be >= 1");
  Eigen::MatrixXd out(n, dim_);
  const std::uint64_t n_chunks = (static_cast<std::uint64_t>(n) + kChunk - 1) / kChunk;
  rng::parallel_chunks(n_chunks, [&](std::uint64_t chunk) {
    rng::Stream stream(seed, tag, chunk);
    Eigen::VectorXd row(dim_);
    const std::int64_t r0 = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t r1 = std::min<std::int64_t>(r0 + kChunk, n);
    for (std::int64_t r = r0; r < r1; ++r) {
      draw_into(stream, row);
      out.row(r) = row;
    }
  });
  return out;
}

Eigen::MatrixXd sample_trend(const TrendDistribution& trend, std::int64_t n, std::uint64_t seed) {
  return trend.sample(n, seed);
}

}  // namespace brisk
