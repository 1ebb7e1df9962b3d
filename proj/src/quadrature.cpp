#include "hemo/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hemo {

// Three-term recurrence of the monic Jacobi polynomials P^{(a,b)} on [-1,1],
// weight (1-x)^a (1+x)^b. Eigenvalues of the Jacobi matrix are the nodes and
// the squared first eigenvector components times mu0 are the weights.
QuadratureRule gauss_jacobi_unit(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("Jacobi exponents must exceed -1");

  const int n = order;
  const double ab = a + b;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));

  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 1) {
      // (k + a + b) / (s - 1) cancels to 1; avoids 0/0 at a + b = -1.
      sub(0) = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0)));
      continue;
    }
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    sub(k - 1) = std::sqrt(num / den);
  }

  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.5 * (1.0 + diag(0));
    rule.weights[0] = mu0 / std::pow(2.0, ab + 1.0);
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigen solve failed");

  // Map x in [-1,1] to u = (1+x)/2; the weight picks up 2^{-(a+b+1)}.
  const double scale = std::pow(2.0, -(ab + 1.0));
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(i));
    rule.weights[i] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

QuadratureRule gauss_legendre_unit(int order) { return gauss_jacobi_unit(order, 0.0, 0.0); }

QuadratureRule rescale(const QuadratureRule& unit, double lo, double hi) {
  QuadratureRule out = unit;
  const double len = hi - lo;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.nodes[i] = lo + len * unit.nodes[i];
    out.weights[i] = len * unit.weights[i];
  }
  return out;
}

}  // namespace hemo
