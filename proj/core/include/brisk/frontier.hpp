#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

namespace brisk {

// Maximal points of a set under the componentwise order.
std::vector<Eigen::VectorXd> pareto_maximal(const std::vector<Eigen::VectorXd>& points);

// Exact integral of e^{<lambda, x>} over the union of lower-open orthants
// { x : x < v_k for some k }, for d in {1, 2, 3} and lambda > 0
// componentwise. d=2 telescopes along the Pareto staircase; d=3 runs a
// plane sweep over the third coordinate.
double frontier_exp_integral(const std::vector<Eigen::VectorXd>& points,
                             const Eigen::VectorXd& lambda);

// Incremental 2-D Pareto staircase keyed by the first coordinate
// (descending); along the map the second coordinate strictly increases.
class Staircase2d {
 public:
  // Returns true when the point enters the frontier (not dominated).
  bool insert(double x, double y);
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  void clear() { points_.clear(); }

  // Telescoped integral of e^{l1 x1 + l2 x2} over the staircase union.
  double integral(double l1, double l2) const;

 private:
  std::map<double, double, std::greater<double>> points_;
};

}  // namespace brisk
