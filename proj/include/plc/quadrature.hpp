#pragma once

#include <functional>
#include <vector>

namespace plc {

/// Gauss-Hermite rule normalized for expectations under the standard normal:
/// sum_i w_i f(x_i) ~ E[f(Z)], Z ~ N(0,1), exact for polynomials of degree
/// 2*order - 1. Nodes and weights come from Golub-Welsch on the Jacobi matrix
/// of the probabilists' Hermite polynomials.
class GaussHermite {
 public:
  explicit GaussHermite(int order);

  double expectation(const std::function<double(double)>& f) const;

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace plc
