#include "hemo/interp.hpp"

#include <algorithm>
#include <cmath>

namespace hemo::interp {

namespace {

double interior_slope(double left, double right) {
  if (left == 0.0 || right == 0.0 || (left > 0.0) != (right > 0.0)) return 0.0;
  return 2.0 / (1.0 / left + 1.0 / right);
}

// Three-point one-sided end slope, limited to keep the end cell monotone.
double end_slope(double s0, double s1) {
  double d = 0.5 * (3.0 * s0 - s1);
  if ((d > 0.0) != (s0 > 0.0) || s0 == 0.0) return 0.0;
  if ((s0 > 0.0) != (s1 > 0.0) && std::abs(d) > std::abs(3.0 * s0)) d = 3.0 * s0;
  return d;
}

}  // namespace

double pchip_slope(std::span<const double> v, std::size_t i) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  if (n == 2) return v[1] - v[0];
  if (i == 0) return end_slope(v[1] - v[0], v[2] - v[1]);
  if (i == n - 1) return end_slope(v[n - 1] - v[n - 2], v[n - 2] - v[n - 3]);
  return interior_slope(v[i] - v[i - 1], v[i + 1] - v[i]);
}

double pchip_uniform(std::span<const double> v, double x) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= n - 1) i = n - 2;
  const double s = x - static_cast<double>(i);
  if (s == 0.0) return v[i];
  const double f0 = v[i], f1 = v[i + 1];
  if (f0 == 0.0 && f1 == 0.0) return 0.0;
  return hermite(s, f0, f1, pchip_slope(v, i), pchip_slope(v, i + 1));
}

}  // namespace hemo::interp

namespace hemo::interp {

namespace {

double nonuniform_slope(std::span<const double> xs, std::span<const double> ys, std::size_t i) {
  const std::size_t n = xs.size();
  auto secant = [&](std::size_t k) { return (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]); };
  if (n == 2) return secant(0);
  if (i == 0 || i == n - 1) {
    const std::size_t k = i == 0 ? 0 : n - 2;
    const std::size_t k2 = i == 0 ? 1 : n - 3;
    const double h0 = xs[k + 1] - xs[k];
    const double h1 = xs[k2 + 1] - xs[k2];
    const double s0 = secant(k), s1 = secant(k2);
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if ((d > 0.0) != (s0 > 0.0) || s0 == 0.0) return 0.0;
    if ((s0 > 0.0) != (s1 > 0.0) && std::abs(d) > std::abs(3.0 * s0)) d = 3.0 * s0;
    return d;
  }
  const double s0 = secant(i - 1), s1 = secant(i);
  if (s0 == 0.0 || s1 == 0.0 || (s0 > 0.0) != (s1 > 0.0)) return 0.0;
  const double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
  const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
  return (w1 + w2) / (w1 / s0 + w2 / s1);
}

}  // namespace

double pchip(std::span<const double> xs, std::span<const double> ys, double x) {
  const std::size_t n = xs.size();
  if (n == 1) return ys[0];
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  if (ys[i] == 0.0 && ys[i + 1] == 0.0) return 0.0;
  return hermite(s, ys[i], ys[i + 1], h * nonuniform_slope(xs, ys, i), h * nonuniform_slope(xs, ys, i + 1));
}

}  // namespace hemo::interp
