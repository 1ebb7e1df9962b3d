#include "hemo/experiments.hpp"

#include "hemo/kernels.hpp"
#include "hemo/stability.hpp"

#include <algorithm>
#include <cmath>

namespace hemo {

bool Verdict::passed() const {
  if (!applicable || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double default_dde_step(const ValidatedModel& model) {
  const double tau = model.tau_max();
  const double cap = model.tau_min() > 0.0 ? std::min(model.tau_min() / 4.0, tau / 64.0) : tau / 64.0;
  return tau / std::ceil(tau / cap - 1e-12);
}

namespace {

Check at_most(std::string name, double measured, double bound, double tol = 0.0) {
  return {std::move(name), measured, bound, tol, "<=", measured <= bound + tol};
}

Check at_least(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, 0.0, ">=", measured >= bound};
}

Check below(std::string name, double measured, double bound) {
  return {std::move(name), measured, 0.0, bound, "<", measured < bound};
}

Verdict not_applicable(std::string name, std::string reason) {
  Verdict v;
  v.experiment = std::move(name);
  v.applicable = false;
  v.reason = std::move(reason);
  return v;
}

}  // namespace

Verdict run_decay(const ValidatedModel& model, const DecaySettings& s, const FieldOptions& options) {
  const DerivedConstants c = derived_constants(model, options.quad_order);
  if (!c.rho || !c.alpha) return not_applicable("decay", "L(2 zeta_tilde + 1) < I fails; no decay rate is guaranteed");

  const Field f = solve_field(model, s.phi, s.horizon, options);
  const double norm = s.phi.sup_norm(model.tau_max());
  std::vector<double> ts, sup;
  double peak = 0.0;
  for (std::size_t k = f.first_step; k < f.slices.size(); ++k) {
    ts.push_back(f.times[k]);
    sup.push_back(f.sup_abs(k));
    peak = std::max(peak, sup.back());
  }
  const double rate = fit_decay_rate(ts, sup);
  const PicardSweep sweep =
      picard_sweep(model, s.phi, model.tau_max() + s.sweep_window, s.sweep_iterations, options);

  Verdict v;
  v.experiment = "decay";
  v.checks.push_back(at_most("sup_norm_bound", peak, norm, 1e-12 * norm));
  v.checks.push_back(at_least("fitted_rate", rate, 0.9 * *c.rho));
  v.checks.push_back(at_most("picard_step_ratio", f.picard.max_ratio, *c.alpha + 0.1));
  v.checks.push_back(at_most("picard_window_ratio", sweep.max_ratio, *c.alpha + 0.1));
  return v;
}

Verdict run_extinction(const ValidatedModel& model, const ExtinctionSettings& s, const FieldOptions& options) {
  ExtinctionSchedule sched;
  try {
    sched = extinction_schedule(model, s.b);
  } catch (const SolverError& e) {
    if (e.kind() != SolverError::Kind::NotApplicable) throw;
    return not_applicable("extinction", e.what());
  }
  const double tau = model.tau_max();
  for (int i = 0; i <= 64; ++i)
    for (int j = 0; j <= 256; ++j)
      if (s.phi(tau * i / 64.0, s.b * j / 256.0) != 0.0)
        return not_applicable("extinction", "initial data do not vanish on maturities <= b");

  const double start = sched.t_bar + s.offset;
  const Field f = solve_field(model, s.phi, start + 0.5, options);
  double worst = 0.0;
  for (std::size_t k = f.first_step; k < f.slices.size(); ++k)
    if (f.times[k] >= start - 1e-12) worst = std::max(worst, f.sup_abs(k));
  const double norm = s.phi.sup_norm(tau);

  Verdict v;
  v.experiment = "extinction";
  v.checks.push_back({"t_bar", sched.t_bar, sched.t_bar, 0.0, "schedule", true});
  v.checks.push_back(below("sup_after_t_bar", worst, 1e-6 * norm));
  return v;
}

Verdict run_agreement(const ValidatedModel& model, const AgreementSettings& s, const FieldOptions& options) {
  AgreementReport r;
  try {
    r = experiment_agreement(model, s.phi1, s.phi2, s.b, s.horizon, options);
  } catch (const SolverError& e) {
    if (e.kind() != SolverError::Kind::NotApplicable) throw;
    return not_applicable("agreement", e.what());
  }
  Verdict v;
  v.experiment = "agreement";
  v.checks.push_back({"t_bar", r.t_bar, r.t_bar, 0.0, "schedule", true});
  v.checks.push_back(below("sup_diff_after_t_bar", r.max_after_t_bar, r.tolerance));
  return v;
}

Verdict run_equilibrium(const ValidatedModel& model, const EquilibriumSettings& s) {
  const BoundaryKernel kernel = make_boundary_kernel(model, s.gain);
  const auto xstar = dde_equilibrium(model, kernel.z());
  if (!xstar) return not_applicable("equilibrium", "no positive constant solution: need 2z - 1 > 0 and beta0(0) > I0/(2z - 1)");
  const double dt = s.dt > 0.0 ? s.dt : default_dde_step(model);
  const DdeSolution sol = integrate(model, kernel, ScalarHistory::constant(model.tau_max(), *xstar), s.horizon, dt);
  double dev = 0.0;
  for (double x : sol.values) dev = std::max(dev, std::abs(x - *xstar));

  Verdict v;
  v.experiment = "equilibrium";
  v.checks.push_back({"x_star", *xstar, *xstar, 0.0, "bisection", true});
  v.checks.push_back(below("max_deviation", dev, s.tolerance));
  return v;
}

}  // namespace hemo
