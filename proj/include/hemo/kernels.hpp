#pragma once

#include "hemo/model.hpp"
#include "hemo/quadrature.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hemo {

class KernelError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Probability of not having divided by proliferating age a.
double survival(const ValidatedModel& model, double a);
/// Age-at-division density k(a) on [tau_min, tau_max]; 0 below tau_min.
double k_density(const ValidatedModel& model, double a);

/// Rule for integrals of the form \int f(a) k(a) da. Built on u = (tau_max - a)/span,
/// where k(a) da = c u^{c-1} du, so the endpoint behaviour of k is absorbed into a
/// Gauss-Jacobi weight and f is integrated as a smooth function. Weights sum to 1.
QuadratureRule kernel_rule(const ValidatedModel& model, int order = 32);

/// exp(-\int_0^t gamma(pi_{-s} m) + V'(pi_{-s} m) ds).
double xi(const ValidatedModel& model, double t, double m, int order = 32);
/// Same attenuation with delta in place of gamma.
double bigK(const ValidatedModel& model, double t, double m, int order = 32);

/// zeta(a, m) = (g^{-1})'(m) k(a) xi(a, g^{-1}(m)).
double zeta(const ValidatedModel& model, double a, double m, int order = 32);

/// sup over maturity of zeta(a, m) / k(a); depends on a only through xi.
double zeta_hat_over_k(const ValidatedModel& model, double a, int order = 32);
double zeta_hat(const ValidatedModel& model, double a, int order = 32);
double zeta_tilde(const ValidatedModel& model, int order = 32);

/// Boundary kernel Z(a) = exp(-nu a) k(a) with nu = gamma(0) + V'(0).
double bigZ(const ValidatedModel& model, double a);
double z_integral(const ValidatedModel& model, int order = 32);

/// Global Lipschitz constant of x -> x beta(m, x), uniform in m.
double lipschitz_L(const ValidatedModel& model);

struct DerivedConstants {
  double I = 0.0;        // inf (delta + V')
  double I0 = 0.0;       // delta(0) + V'(0)
  double nu = 0.0;       // gamma(0) + V'(0)
  double z = 0.0;        // \int Z
  double zeta_tilde = 0.0;
  std::optional<double> tau0;  // absent when unbounded
  double L = 0.0;
  std::optional<double> alpha;  // L(2 zeta_tilde + 1)/I, when I > 0
  std::optional<double> rho;    // decay rate, when L(2 zeta_tilde + 1) < I
  std::optional<double> theta;
  double beta0_at_zero = 0.0;
  double ginv_slope_at_zero = 0.0;
};

DerivedConstants derived_constants(const ValidatedModel& model, int order = 32);

/// Largest rho in (0, I) with L (1 + 2 zt e^{rho tau}) < I - rho, by bisection.
std::optional<double> decay_rate(double L, double I, double zeta_tilde, double tau_max);

}  // namespace hemo
