#include "hemo/stability.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hemo {

namespace {

Criterion less_than(double lhs, double rhs) { return {lhs < rhs, lhs, rhs, rhs - lhs}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::optional<double> dde_equilibrium(const ValidatedModel& model, double z) {
  const double I0 = model.rates().delta(0.0) + model.velocity().derivative(0.0);
  const double gain = 2.0 * z - 1.0;
  if (!(gain > 0.0) || !(I0 > 0.0)) return std::nullopt;
  const double target = I0 / gain;
  const double b00 = model.beta(0.0, 0.0);
  if (!(b00 > target)) return std::nullopt;

  auto residual = [&](double x) { return model.beta(0.0, x) - target; };
  double lo = 0.0;
  double hi = 1.0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e300) return std::nullopt;
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  const double x = std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi;
  return x;
}

std::optional<double> dde_equilibrium(const ValidatedModel& model) {
  return dde_equilibrium(model, z_integral(model));
}

StabilityReport evaluate(const ValidatedModel& model) {
  StabilityReport r;
  r.constants = derived_constants(model);
  const auto& c = r.constants;

  r.local_exp_stable = less_than(c.L * (2.0 * c.zeta_tilde + 1.0), c.I);
  r.global_lipschitz_stable = r.local_exp_stable;
  r.dde_global_stable = less_than((2.0 * c.z - 1.0) * c.beta0_at_zero, c.I0);
  r.tau0_finite = c.tau0.has_value();
  const double tau0 = c.tau0.value_or(std::numeric_limits<double>::infinity());
  r.structural = less_than(tau0, model.tau_min());
  r.global_on_nonnegative_data = r.local_exp_stable.holds && r.dde_global_stable.holds && r.structural.holds;

  r.equilibrium = dde_equilibrium(model, c.z);
  if (r.equilibrium) {
    r.equilibrium_residual = (2.0 * c.z - 1.0) * model.beta(0.0, *r.equilibrium) - c.I0;
  }

  const auto& rates = model.rates();
  if (rates.delta.min_on_unit() == 0.0) r.notes.push_back("delta vanishes somewhere on [0,1]; positivity assumed by the model is relaxed");
  if (rates.gamma.min_on_unit() == 0.0) r.notes.push_back("gamma vanishes somewhere on [0,1]; positivity assumed by the model is relaxed");
  if (c.ginv_slope_at_zero != 1.0) {
    const double z_trace = c.ginv_slope_at_zero * c.z;
    const double lhs = (2.0 * z_trace - 1.0) * c.beta0_at_zero;
    r.notes.push_back("boundary kernel Z omits the factor (g^-1)'(0) = " + fmt(c.ginv_slope_at_zero) +
                      " carried by zeta(a,0); with it z = " + fmt(z_trace) + " and (2z-1)beta0(0) = " + fmt(lhs) +
                      (lhs < c.I0 ? " < I0 (criterion still holds)" : " >= I0 (criterion fails)"));
  }
  const double n = model.reintroduction().exponent;
  if ((n - 1.0) * (n - 1.0) > 4.0 * n) {
    r.notes.push_back("Hill exponent n = " + fmt(n) + " > 3+2sqrt(2): Lipschitz constant exceeds sup a/b by the factor (n-1)^2/(4n)");
  }
  if (!r.tau0_finite) r.notes.push_back("re-maturation time is unbounded as m -> 0; tau0 = +inf");
  if (r.global_on_nonnegative_data) {
    r.notes.push_back("local exponential stability with a globally stable boundary trace implies global stability for nonnegative initial data");
  }
  return r;
}

}  // namespace hemo
