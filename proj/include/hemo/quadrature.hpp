#pragma once

#include <cstddef>
#include <vector>

namespace hemo {

/// Nodes and weights of an interpolatory rule on a fixed interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss-Jacobi rule for the weight (1-u)^a u^b on [0,1], built with Golub-Welsch.
/// Requires a, b > -1.
QuadratureRule gauss_jacobi_unit(int order, double a, double b);

/// Gauss-Legendre rule on [0,1].
QuadratureRule gauss_legendre_unit(int order);

/// Maps a unit-interval rule onto [lo, hi].
QuadratureRule rescale(const QuadratureRule& unit, double lo, double hi);

}  // namespace hemo
