#include "hemo/dde.hpp"

#include "hemo/interp.hpp"
#include "hemo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hemo {

const char* to_string(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::StepTooLarge: return "StepTooLarge";
    case SolverError::Kind::NonFiniteState: return "NonFiniteState";
    case SolverError::Kind::PicardDiverged: return "PicardDiverged";
    case SolverError::Kind::PicardNotConverged: return "PicardNotConverged";
    case SolverError::Kind::HistoryGap: return "HistoryGap";
    case SolverError::Kind::NotApplicable: return "NotApplicable";
    case SolverError::Kind::DegenerateSeries: return "DegenerateSeries";
  }
  return "SolverError";
}

double BoundaryKernel::z() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

BoundaryKernel kernel_with_scale(const ValidatedModel& model, double scale, int order) {
  const double nu = model.rates().gamma(0.0) + model.velocity().derivative(0.0);
  const QuadratureRule rule = kernel_rule(model, order);
  BoundaryKernel k;
  k.ages = rule.nodes;
  k.weights.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) k.weights[q] = scale * rule.weights[q] * std::exp(-nu * rule.nodes[q]);
  k.gain_scale = scale;
  k.order = order;
  return k;
}

}  // namespace

BoundaryKernel make_boundary_kernel(const ValidatedModel& model, BoundaryGain gain, int order) {
  const double scale = gain == BoundaryGain::trace ? model.division().inverse_derivative(0.0) : 1.0;
  return kernel_with_scale(model, scale, order);
}

// ---------------------------------------------------------------------------
// ScalarHistory

ScalarHistory::ScalarHistory(double tau_max, std::vector<double> values, std::vector<double> slopes)
    : tau_max_(tau_max), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() < 2 || values_.size() != slopes_.size()) {
    throw std::invalid_argument("ScalarHistory needs >= 2 samples with matching slopes");
  }
  if (!(tau_max > 0.0)) throw std::invalid_argument("ScalarHistory needs tau_max > 0");
  step_ = tau_max_ / static_cast<double>(values_.size() - 1);
}

ScalarHistory ScalarHistory::constant(double tau_max, double value, int intervals) {
  return ScalarHistory(tau_max, std::vector<double>(intervals + 1, value), std::vector<double>(intervals + 1, 0.0));
}

ScalarHistory ScalarHistory::from_function(double tau_max, int intervals, const std::function<double(double)>& f,
                                           const std::function<double(double)>& df) {
  std::vector<double> v(intervals + 1), d(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double t = tau_max * i / intervals;
    v[i] = f(t);
    d[i] = df(t);
  }
  return ScalarHistory(tau_max, std::move(v), std::move(d));
}

ScalarHistory ScalarHistory::from_samples(double tau_max, std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw std::invalid_argument("from_samples needs >= 3 samples");
  const double h = tau_max / static_cast<double>(n - 1);
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return ScalarHistory(tau_max, std::move(values), std::move(d));
}

double ScalarHistory::value(double t) const {
  const double x = std::clamp(t / step_, 0.0, static_cast<double>(intervals()));
  int i = std::min(static_cast<int>(x), intervals() - 1);
  const double s = x - i;
  if (s == 0.0) return values_[i];
  return interp::hermite(s, values_[i], values_[i + 1], step_ * slopes_[i], step_ * slopes_[i + 1]);
}

double ScalarHistory::slope(double t) const {
  const double x = std::clamp(t / step_, 0.0, static_cast<double>(intervals()));
  int i = std::min(static_cast<int>(x), intervals() - 1);
  const double s = x - i;
  return interp::hermite_derivative(s, values_[i], values_[i + 1], step_ * slopes_[i], step_ * slopes_[i + 1]) / step_;
}

// ---------------------------------------------------------------------------
// DdeSolution

namespace {

struct Cell {
  std::size_t i;
  double s;
};

// Cell of the stored grid containing t; s > 1 extrapolates past the last sample.
Cell locate(const DdeSolution& sol, double t) {
  const std::size_t n = sol.times.size();
  if (n < 2) return {0, 0.0};
  const double x = (t - sol.tau_max) / sol.dt;
  std::size_t i = x <= 0.0 ? 0 : static_cast<std::size_t>(x);
  if (i > n - 2) i = n - 2;
  return {i, x - static_cast<double>(i)};
}

}  // namespace

double DdeSolution::value_at(double t) const {
  if (t <= tau_max) return history.value(t);
  if (times.size() == 1) return values[0] + (t - tau_max) * slopes[0];
  const Cell c = locate(*this, t);
  if (c.s == 0.0) return values[c.i];
  return interp::hermite(c.s, values[c.i], values[c.i + 1], dt * slopes[c.i], dt * slopes[c.i + 1]);
}

double DdeSolution::slope_at(double t) const {
  if (t < tau_max) return history.slope(t);
  if (times.size() == 1) return slopes[0];
  const Cell c = locate(*this, t);
  return interp::hermite_derivative(c.s, values[c.i], values[c.i + 1], dt * slopes[c.i], dt * slopes[c.i + 1]) / dt;
}

ScalarHistory DdeSolution::window(double t_end) const {
  const int intervals = std::max(8, static_cast<int>(std::lround(tau_max / dt)));
  std::vector<double> v(intervals + 1), d(intervals + 1);
  const double t0 = t_end - tau_max;
  for (int i = 0; i <= intervals; ++i) {
    const double t = t0 + tau_max * i / intervals;
    v[i] = value_at(t);
    d[i] = slope_at(t);
  }
  return ScalarHistory(tau_max, std::move(v), std::move(d));
}

// ---------------------------------------------------------------------------
// Integration

DdeSolution integrate(const ValidatedModel& model, const ScalarHistory& psi, double T, double dt,
                      const DdeOptions& options) {
  return integrate(model, make_boundary_kernel(model, options.gain, options.quad_order), psi, T, dt,
                   options.record_lyapunov);
}

DdeSolution integrate(const ValidatedModel& model, const BoundaryKernel& kernel, const ScalarHistory& psi, double T,
                      double dt, bool record_lyapunov) {
  const double tau_min = model.tau_min();
  const double tau_max = model.tau_max();
  const double limit = tau_min > 0.0 ? tau_min / 4.0 : tau_max / 64.0;
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    throw SolverError(SolverError::Kind::StepTooLarge,
                      "dde step " + std::to_string(dt) + " exceeds limit " + std::to_string(limit) + "; reduce dt");
  }
  if (!(T > tau_max)) throw SolverError(SolverError::Kind::StepTooLarge, "horizon must exceed tau_max");
  if (std::abs(psi.tau_max() - tau_max) > 1e-12 * tau_max) {
    throw SolverError(SolverError::Kind::HistoryGap, "history must span exactly [0, tau_max]");
  }

  const double I0 = model.rates().delta(0.0) + model.velocity().derivative(0.0);
  const std::size_t steps = static_cast<std::size_t>(std::ceil((T - tau_max) / dt - 1e-9));

  DdeSolution sol;
  sol.tau_max = tau_max;
  sol.dt = dt;
  sol.quad_order = kernel.order;
  sol.gain_scale = kernel.gain_scale;
  sol.history = psi;
  sol.times.reserve(steps + 1);
  sol.values.reserve(steps + 1);
  sol.slopes.reserve(steps + 1);

  auto lambda0 = [&](double x) { return model.flux(0.0, x); };
  auto delayed = [&](double t) {
    double sum = 0.0;
    for (std::size_t q = 0; q < kernel.ages.size(); ++q) sum += kernel.weights[q] * lambda0(sol.value_at(t - kernel.ages[q]));
    return 2.0 * sum;
  };
  auto rhs = [&](double t, double x) { return -(I0 + model.beta(0.0, x)) * x + delayed(t); };

  const double x0 = psi.values().back();
  sol.times.push_back(tau_max);
  sol.values.push_back(x0);
  sol.slopes.push_back(rhs(tau_max, x0));

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = tau_max + static_cast<double>(n) * dt;
    const double x = sol.values[n];
    const double k1 = sol.slopes[n];
    const double k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    const double k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    const double k4 = rhs(t + dt, x + dt * k3);
    const double x1 = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(x1)) {
      throw SolverError(SolverError::Kind::NonFiniteState, "non-finite state at step " + std::to_string(n + 1) +
                                                               " (t = " + std::to_string(t + dt) + ")");
    }
    const double t1 = tau_max + static_cast<double>(n + 1) * dt;
    sol.times.push_back(t1);
    sol.values.push_back(x1);
    sol.slopes.push_back(rhs(t1, x1));
  }

  if (record_lyapunov) {
    sol.lyapunov.reserve(sol.times.size());
    for (double t : sol.times) sol.lyapunov.push_back(lyapunov_H(model, kernel, sol.window(t)));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Lyapunov functional

double lambda_antideriv(const ValidatedModel& model, double x) {
  const auto& beta = model.reintroduction();
  const double a = beta.a(0.0);
  const double b = beta.b(0.0);
  if (x <= 0.0) return 0.5 * a * x * x / b;
  const double n = beta.exponent;
  if (n == 1.0) return a * (x - b * std::log1p(x / b));
  if (n == 2.0) return 0.5 * a * std::log1p(x * x / b);
  static const QuadratureRule rule = gauss_legendre_unit(64);
  return x * rule.integrate([&](double u) { return model.flux(0.0, u * x); });
}

double lyapunov_H(const ValidatedModel& model, const BoundaryKernel& kernel, const ScalarHistory& w) {
  const double tau = w.tau_max();
  const double h = w.step();
  const int n = w.intervals();
  auto lam2 = [&](double t) {
    const double l = model.flux(0.0, w.value(t));
    return l * l;
  };
  // tail[i] = \int_{t_i}^{tau} lambda^2, Simpson per cell.
  std::vector<double> node(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double l = model.flux(0.0, w.values()[i]);
    node[i] = l * l;
  }
  std::vector<double> tail(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    const double mid = lam2((i + 0.5) * h);
    tail[i] = tail[i + 1] + h / 6.0 * (node[i] + 4.0 * mid + node[i + 1]);
  }

  double memory = 0.0;
  for (std::size_t q = 0; q < kernel.ages.size(); ++q) {
    const double lo = std::max(0.0, tau - kernel.ages[q]);
    int k = std::min(static_cast<int>(lo / h), n - 1);
    const double top = (k + 1) * h;
    const double part = (top - lo) / 6.0 * (lam2(lo) + 4.0 * lam2(0.5 * (lo + top)) + node[k + 1]);
    memory += kernel.weights[q] * (part + tail[k + 1]);
  }
  return lambda_antideriv(model, w.values().back()) + memory;
}

double lyapunov_H(const ValidatedModel& model, const ScalarHistory& window) {
  return lyapunov_H(model, make_boundary_kernel(model), window);
}

MonotonicityReport check_H_monotone(const ValidatedModel& model, const DdeSolution& sol) {
  const BoundaryKernel kernel = kernel_with_scale(model, sol.gain_scale, sol.quad_order);
  MonotonicityReport r;
  const double I0 = model.rates().delta(0.0) + model.velocity().derivative(0.0);
  r.criterion_holds = I0 > (2.0 * kernel.z() - 1.0) * model.beta(0.0, 0.0);

  bool nonnegative = *std::min_element(sol.history.values().begin(), sol.history.values().end()) >= 0.0;
  r.asserted = r.criterion_holds && nonnegative;

  const double stride = sol.tau_max / 8.0;
  const double end = sol.final_time();
  for (int k = 0;; ++k) {
    const double t = sol.tau_max + k * stride;
    if (t > end + 1e-9 * stride) break;
    r.times.push_back(t);
    r.values.push_back(lyapunov_H(model, kernel, sol.window(std::min(t, end))));
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    peak = std::max(peak, std::abs(r.values[i]));
    if (i > 0) r.max_increase = std::max(r.max_increase, r.values[i] - r.values[i - 1]);
  }
  r.tolerance = 1e-6 * (1.0 + peak);
  r.passed = !r.asserted || r.max_increase <= r.tolerance;
  return r;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
  const std::size_t n = std::min(times.size(), values.size());
  const std::size_t start = n / 2;
  if (n - start < 10) throw SolverError(SolverError::Kind::DegenerateSeries, "tail shorter than 10 samples");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double cnt = static_cast<double>(n - start);
  for (std::size_t i = start; i < n; ++i) {
    if (values[i] == 0.0 || !std::isfinite(values[i])) {
      throw SolverError(SolverError::Kind::DegenerateSeries, "series tail contains zero or non-finite samples");
    }
    const double y = std::log(std::abs(values[i]));
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
  }
  const double denom = cnt * stt - st * st;
  if (denom <= 0.0) throw SolverError(SolverError::Kind::DegenerateSeries, "tail times are degenerate");
  return -(cnt * sty - st * sy) / denom;
}

}  // namespace hemo
