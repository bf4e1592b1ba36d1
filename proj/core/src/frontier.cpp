#include "brisk/frontier.hpp"

#include <algorithm>
#include <cmath>

#include "brisk/errors.hpp"

namespace brisk {

namespace {

bool dominates(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return (p.array() >= q.array()).all();
}

void validate(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& lambda) {
  const auto d = lambda.size();
  if (d < 1 || d > 3) {
    throw DimensionTooLarge("frontier_exp_integral supports d in {1,2,3}, got d=" +
                            std::to_string(d));
  }
  if ((lambda.array() <= 0.0).any()) {
    throw NonPositiveLambda("frontier_exp_integral requires lambda > 0 componentwise");
  }
  if (points.empty()) throw DomainError("frontier_exp_integral: empty point set");
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionMismatch("frontier point dimension mismatch");
    if (!p.allFinite()) throw DomainError("frontier point has non-finite entries");
  }
}

}  // namespace

std::vector<Eigen::VectorXd> pareto_maximal(const std::vector<Eigen::VectorXd>& points) {
  std::vector<Eigen::VectorXd> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
  });
  std::vector<Eigen::VectorXd> kept;
  for (const auto& p : sorted) {
    bool dominated = false;
    for (const auto& q : kept) {
      if (dominates(q, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(p);
  }
  return kept;
}

bool Staircase2d::insert(double x, double y) {
  auto it = points_.lower_bound(x);  // first key <= x in descending order
  if (it != points_.end() && it->first == x) {
    if (it->second >= y) return false;
  }
  if (it != points_.begin()) {
    auto pred = std::prev(it);  // key > x
    if (pred->second >= y) return false;
  }
  while (it != points_.end() && it->second <= y) it = points_.erase(it);
  points_.emplace_hint(it, x, y);
  return true;
}

double Staircase2d::integral(double l1, double l2) const {
  double acc = 0.0;
  double prev_e2 = 0.0;  // e^{l2 * (-inf)}
  for (const auto& [x, y] : points_) {
    const double e2 = std::exp(l2 * y);
    acc += std::exp(l1 * x) * (e2 - prev_e2);
    prev_e2 = e2;
  }
  return acc / (l1 * l2);
}

double frontier_exp_integral(const std::vector<Eigen::VectorXd>& points,
                             const Eigen::VectorXd& lambda) {
  validate(points, lambda);
  const auto d = lambda.size();

  if (d == 1) {
    double m = points.front()[0];
    for (const auto& p : points) m = std::max(m, p[0]);
    return std::exp(lambda[0] * m) / lambda[0];
  }

  if (d == 2) {
    Staircase2d stairs;
    for (const auto& p : points) stairs.insert(p[0], p[1]);
    return stairs.integral(lambda[0], lambda[1]);
  }

  // d == 3: sweep the third coordinate downward; between consecutive
  // heights the cross-section is the staircase of the points already seen.
  std::vector<const Eigen::VectorXd*> order;
  order.reserve(points.size());
  for (const auto& p : points) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const Eigen::VectorXd* a, const Eigen::VectorXd* b) { return (*a)[2] > (*b)[2]; });

  Staircase2d stairs;
  double acc = 0.0;
  double area = 0.0;
  bool dirty = false;
  const double l3 = lambda[2];
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Eigen::VectorXd& p = *order[i];
    dirty = stairs.insert(p[0], p[1]) || dirty;
    const double z = p[2];
    const double z_next = (i + 1 < order.size()) ? (*order[i + 1])[2] : 0.0;
    const bool last = i + 1 == order.size();
    if (!last && z_next == z) continue;  // same-height group
    if (dirty) {
      area = stairs.integral(lambda[0], lambda[1]);
      dirty = false;
    }
    const double upper = std::exp(l3 * z);
    const double lower = last ? 0.0 : std::exp(l3 * z_next);
    acc += area * (upper - lower);
  }
  return acc / l3;
}

}  // namespace brisk
