#include "hemo/kernels.hpp"

#include "hemo/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

namespace hemo {

namespace {

const QuadratureRule& legendre(int order) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre_unit(order)).first;
  return it->second;
}

template <class Rate>
double attenuation(const ValidatedModel& model, double t, double m, int order, Rate&& rate) {
  if (t <= 0.0) return 1.0;
  const auto& v = model.velocity();
  if (m <= 0.0) return std::exp(-(rate(0.0) + v.derivative(0.0)) * t);
  const double y = log_h(model, m);
  const auto& rule = legendre(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = t * rule.nodes[i];
    const double mp = maturity_from_log(model, y - s);
    sum += rule.weights[i] * (rate(mp) + v.derivative(mp));
  }
  return std::exp(-t * sum);
}

constexpr int kMaturityGrid = 512;

}  // namespace

double survival(const ValidatedModel& model, double a) {
  const auto& k = model.kernel();
  if (a < 0.0 || a > k.tau_max) throw KernelError("survival: age outside [0, tau_max]");
  if (a <= k.tau_min) return 1.0;
  return std::pow((k.tau_max - a) / k.span(), k.shape);
}

double k_density(const ValidatedModel& model, double a) {
  const auto& k = model.kernel();
  if (a < 0.0 || a > k.tau_max) throw KernelError("k_density: age outside [0, tau_max]");
  if (a < k.tau_min) return 0.0;
  return k.shape * std::pow(k.tau_max - a, k.shape - 1.0) / std::pow(k.span(), k.shape);
}

QuadratureRule kernel_rule(const ValidatedModel& model, int order) {
  const auto& k = model.kernel();
  QuadratureRule unit = gauss_jacobi_unit(order, 0.0, k.shape - 1.0);
  for (std::size_t i = 0; i < unit.size(); ++i) {
    unit.nodes[i] = k.tau_max - k.span() * unit.nodes[i];
    unit.weights[i] *= k.shape;
  }
  return unit;
}

double xi(const ValidatedModel& model, double t, double m, int order) {
  const auto& gamma = model.rates().gamma;
  return attenuation(model, t, m, order, [&](double mm) { return gamma(mm); });
}

double bigK(const ValidatedModel& model, double t, double m, int order) {
  const auto& delta = model.rates().delta;
  return attenuation(model, t, m, order, [&](double mm) { return delta(mm); });
}

double zeta(const ValidatedModel& model, double a, double m, int order) {
  const auto& div = model.division();
  const double slope = div.inverse_derivative(m);
  if (slope == 0.0) return 0.0;
  return slope * k_density(model, a) * xi(model, a, div.inverse(m), order);
}

double zeta_hat_over_k(const ValidatedModel& model, double a, int order) {
  // Over m in [0, g(1)] the mother maturity g^{-1}(m) sweeps [0, 1] with constant slope.
  const double slope = 1.0 / model.division().ratio;
  std::vector<double> vals(kMaturityGrid);
  int best = 0;
  for (int i = 0; i < kMaturityGrid; ++i) {
    vals[i] = xi(model, a, static_cast<double>(i) / (kMaturityGrid - 1), order);
    if (vals[i] > vals[best]) best = i;
  }
  double peak = vals[best];
  if (best > 0 && best < kMaturityGrid - 1) {
    // One Newton step on the sampled parabola.
    const double h = 1.0 / (kMaturityGrid - 1);
    const double f0 = vals[best - 1], f1 = vals[best], f2 = vals[best + 1];
    const double curv = f0 - 2.0 * f1 + f2;
    if (curv < 0.0) {
      const double shift = 0.5 * (f0 - f2) / curv;
      const double mm = (best + shift) * h;
      peak = std::max(peak, xi(model, a, std::clamp(mm, 0.0, 1.0), order));
    }
  }
  return slope * peak;
}

double zeta_hat(const ValidatedModel& model, double a, int order) {
  return k_density(model, a) * zeta_hat_over_k(model, a, order);
}

double zeta_tilde(const ValidatedModel& model, int order) {
  return kernel_rule(model, order).integrate([&](double a) { return zeta_hat_over_k(model, a, order); });
}

double bigZ(const ValidatedModel& model, double a) {
  const double nu = model.rates().gamma(0.0) + model.velocity().derivative(0.0);
  return std::exp(-nu * a) * k_density(model, a);
}

double z_integral(const ValidatedModel& model, int order) {
  const double nu = model.rates().gamma(0.0) + model.velocity().derivative(0.0);
  return kernel_rule(model, order).integrate([&](double a) { return std::exp(-nu * a); });
}

double lipschitz_L(const ValidatedModel& model) {
  const auto& beta = model.reintroduction();
  double sup = 0.0;
  for (int i = 0; i <= 1024; ++i) {
    const double m = i / 1024.0;
    sup = std::max(sup, beta.a(m) / beta.b(m));
  }
  // d/dx [x a/(x^n + b)] = (a/b) (1 - (n-1)t)/(1+t)^2 with t = x^n/b; its most negative
  // value is -(n-1)^2/(4n), which dominates the slope a/b at x = 0 once n > 3 + 2 sqrt 2.
  const double n = beta.exponent;
  const double trough = (n - 1.0) * (n - 1.0) / (4.0 * n);
  return sup * std::max(1.0, trough);
}

std::optional<double> decay_rate(double L, double I, double zt, double tau_max) {
  auto margin = [&](double rho) { return I - rho - L * (1.0 + 2.0 * zt * std::exp(rho * tau_max)); };
  if (!(I > 0.0) || !(margin(0.0) > 0.0)) return std::nullopt;
  double lo = 0.0;
  double hi = I - 1e-12;
  if (margin(hi) > 0.0) return hi;
  for (int it = 0; it < 400 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? lo : hi) = mid;
  }
  // lo keeps the strict inequality, so L theta < 1 holds at the returned rate.
  return lo;
}

DerivedConstants derived_constants(const ValidatedModel& model, int order) {
  DerivedConstants c;
  const auto& v = model.velocity();
  const auto& r = model.rates();

  c.I = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1024; ++i) {
    const double m = i / 1024.0;
    c.I = std::min(c.I, r.delta(m) + v.derivative(m));
  }
  c.I0 = r.delta(0.0) + v.derivative(0.0);
  c.nu = r.gamma(0.0) + v.derivative(0.0);
  c.z = z_integral(model, order);
  c.zeta_tilde = zeta_tilde(model, order);
  try {
    c.tau0 = tau0(model);
  } catch (const FlowError&) {
    c.tau0.reset();
  }
  c.L = lipschitz_L(model);
  if (c.I > 0.0) c.alpha = c.L * (2.0 * c.zeta_tilde + 1.0) / c.I;
  c.rho = decay_rate(c.L, c.I, c.zeta_tilde, model.tau_max());
  if (c.rho) c.theta = (1.0 + 2.0 * c.zeta_tilde * std::exp(*c.rho * model.tau_max())) / (c.I - *c.rho);
  c.beta0_at_zero = model.beta(0.0, 0.0);
  c.ginv_slope_at_zero = model.division().inverse_derivative(0.0);
  return c;
}

}  // namespace hemo
