#pragma once

#include <span>

namespace hemo::interp {

/// Cubic Hermite on [0,1] in the local coordinate s, with endpoint slopes already
/// scaled by the interval length.
inline double hermite(double s, double f0, double f1, double d0, double d1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * f1 +
         (s3 - s2) * d1;
}

inline double hermite_derivative(double s, double f0, double f1, double d0, double d1) {
  const double s2 = s * s;
  return (6.0 * s2 - 6.0 * s) * f0 + (3.0 * s2 - 4.0 * s + 1.0) * d0 + (-6.0 * s2 + 6.0 * s) * f1 +
         (3.0 * s2 - 2.0 * s) * d1;
}

/// Monotone (Fritsch-Carlson) cubic on uniformly spaced samples, evaluated at the
/// fractional index x in [0, n-1]. Reproduces the data range on every cell, so an
/// interval bounded by zeros evaluates to exactly zero.
double pchip_uniform(std::span<const double> values, double x);

/// PCHIP slope (per unit index) at sample i.
double pchip_slope(std::span<const double> values, std::size_t i);

}  // namespace hemo::interp

namespace hemo::interp {

/// Monotone cubic on arbitrary increasing abscissae (xs.size() == ys.size() >= 2).
/// Clamps outside the data range.
double pchip(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace hemo::interp
