#include "hemo/field.hpp"

#include "hemo/flow.hpp"
#include "hemo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hemo {

double default_field_step(const ValidatedModel& model) {
  const double tau = model.tau_max();
  const double cap = model.tau_min() > 0.0 ? std::min(model.tau_min(), tau / 32.0) : tau / 64.0;
  return tau / std::ceil(tau / cap - 1e-12);
}

SliceLookup Field::lookup() const { return SliceLookup(grid, slices, slices.size(), t0, &trace, &floor_values); }

double Field::value(const ValidatedModel& model, double t, double m) const {
  const SliceLookup lk = lookup();
  if (m <= 0.0) return lk.floor(t);
  return lk(t, log_h(model, m));
}

double Field::sup_abs(std::size_t k) const {
  double s = 0.0;
  for (double v : slices[k]) s = std::max(s, std::abs(v));
  return s;
}

namespace {

struct Setup {
  double dt = 0.0;
  std::size_t Kh = 0;     // index of tau_max
  std::size_t steps = 0;  // solved steps
  double I0 = 0.0;
};

Setup check_step(const ValidatedModel& model, double T, const FieldOptions& options) {
  Setup s;
  const double tau = model.tau_max();
  s.dt = options.dt > 0.0 ? options.dt : default_field_step(model);
  const double ratio = tau / s.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw SolverError(SolverError::Kind::HistoryGap,
                      "field step " + std::to_string(s.dt) + " must divide tau_max = " + std::to_string(tau));
  }
  if (model.tau_min() > 0.0 && s.dt > model.tau_min() * (1.0 + 1e-12)) {
    throw SolverError(SolverError::Kind::StepTooLarge, "field step " + std::to_string(s.dt) + " exceeds tau_min = " +
                                                           std::to_string(model.tau_min()) + "; reduce dt");
  }
  if (!(T > tau)) throw SolverError(SolverError::Kind::StepTooLarge, "horizon must exceed tau_max");
  s.Kh = static_cast<std::size_t>(std::lround(ratio));
  s.steps = static_cast<std::size_t>(std::ceil((T - tau) / s.dt - 1e-9));
  s.I0 = model.rates().delta(0.0) + model.velocity().derivative(0.0);
  return s;
}

DdeSolution boundary_trace(const ValidatedModel& model, const InitialData& phi, const Setup& s,
                           const FieldOptions& options) {
  const double tau = model.tau_max();
  const double limit = model.tau_min() > 0.0 ? model.tau_min() / 4.0 : tau / 64.0;
  const int nsub = static_cast<int>(std::ceil(s.dt / limit - 1e-12));
  const double h = s.dt / nsub;
  const int intervals = static_cast<int>(s.Kh) * nsub;
  const ScalarHistory psi = ScalarHistory::from_function(
      tau, intervals, [&](double t) { return phi(t, 0.0); }, [&](double t) { return phi.dt(t, 0.0); });
  DdeOptions o;
  o.gain = options.floor_gain;
  o.quad_order = options.quad_order;
  return integrate(model, psi, tau + static_cast<double>(s.steps) * s.dt, h, o);
}

Field history_field(const ValidatedModel& model, const InitialData& phi, const Setup& s, const FieldOptions& options) {
  Field f;
  f.options = options;
  f.options.dt = s.dt;
  f.grid = make_grid(model, s.dt, options.y_min);
  f.first_step = s.Kh;
  const std::size_t total = s.Kh + s.steps + 1;
  f.times.reserve(total);
  f.slices.reserve(total);
  for (std::size_t k = 0; k <= s.Kh; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    std::vector<double> v(f.grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = phi(t, f.grid.m[j]);
    f.times.push_back(t);
    f.slices.push_back(std::move(v));
  }
  return f;
}

// Attenuation factors exp(-\int rate) over one and two steps for each node.
struct Attenuation {
  std::vector<double> one, two;
};

Attenuation attenuation(const ValidatedModel& model, const MaturityGrid& grid, int order, bool proliferating) {
  Attenuation a;
  a.one.resize(grid.size());
  a.two.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    a.one[j] = proliferating ? xi(model, grid.dt, grid.m[j], order) : bigK(model, grid.dt, grid.m[j], order);
    a.two[j] = proliferating ? xi(model, 2.0 * grid.dt, grid.m[j], order) : bigK(model, 2.0 * grid.dt, grid.m[j], order);
  }
  return a;
}

// Boundary trace source F = Gd - lambda0 = x' + I0 x at a stored trace time.
double trace_source(const DdeSolution& trace, double I0, double t) {
  return trace.slope_at(t) + I0 * trace.value_at(t);
}

void compute_source(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                    std::vector<double>& out, int workers) {
  out.resize(tables.nodes);
  if (workers == 1 || !parallel_available()) {
    source_serial(tables, model, lookup, t, out);
  } else {
    source_parallel(tables, model, lookup, t, out, workers);
  }
}

// Known part of the characteristic update at node j for slice n+1, and the weight
// of the new-time source. Index -1 and -2 along the characteristic read the floor.
struct Stepper {
  const MaturityGrid& grid;
  const Attenuation& att;
  double dt;

  template <class NodeN, class NodeF>
  void known(bool first, std::size_t n, std::size_t j, NodeN&& N, NodeF&& F, double& A, double& c) const {
    const long jj = static_cast<long>(j);
    if (first) {
      const double k1 = att.one[j];
      A = N(n, jj - 1) * k1 + 0.5 * dt * F(n, jj - 1) * k1;
      c = 0.5 * dt;
    } else {
      const double k1 = att.one[j], k2 = att.two[j];
      A = N(n - 1, jj - 2) * k2 + dt / 3.0 * (F(n - 1, jj - 2) * k2 + 4.0 * F(n, jj - 1) * k1);
      c = dt / 3.0;
    }
  }
};

}  // namespace

Field solve_field(const ValidatedModel& model, const InitialData& phi, double T, const FieldOptions& options) {
  const Setup s = check_step(model, T, options);
  Field f = history_field(model, phi, s, options);
  f.trace = boundary_trace(model, phi, s, options);
  const auto& grid = f.grid;
  const std::size_t nodes = grid.size();
  const GainTables gain = make_gain_tables(model, grid, options.quad_order);
  const Attenuation att = attenuation(model, grid, options.quad_order, false);
  const Stepper stepper{grid, att, s.dt};
  const bool explicit_gain = s.dt <= model.tau_min() * (1.0 + 1e-12);

  for (std::size_t k = 0; k <= s.Kh; ++k) f.floor_values.push_back(f.trace.value_at(f.times[k]));

  // Sources F = Gd - lambda at the last two slices.
  std::vector<double> gd;
  std::vector<double> F_prev, F_cur(nodes);
  compute_source(gain, model, SliceLookup(grid, f.slices, s.Kh + 1, 0.0, &f.trace, nullptr), f.times[s.Kh], gd,
                 options.workers);
  for (std::size_t j = 0; j < nodes; ++j) F_cur[j] = gd[j] - model.flux(grid.m[j], f.slices[s.Kh][j]);

  auto N_at = [&](std::size_t n, long j) {
    return j < 0 ? f.trace.value_at(f.times[n]) : f.slices[n][static_cast<std::size_t>(j)];
  };
  auto F_at = [&](std::size_t n, long j) {
    if (j < 0) return trace_source(f.trace, s.I0, f.times[n]);
    return (n == f.slices.size() - 1 ? F_cur : F_prev)[static_cast<std::size_t>(j)];
  };

  std::vector<double> A(nodes), c(nodes), iter(nodes), next(nodes);
  for (std::size_t step = 0; step < s.steps; ++step) {
    const std::size_t n = s.Kh + step;
    const double t1 = static_cast<double>(n + 1) * s.dt;
    const bool first = step == 0;
    for (std::size_t j = 0; j < nodes; ++j) {
      stepper.known(first, n, j, N_at, F_at, A[j], c[j]);
      iter[j] = N_at(n, static_cast<long>(j) - 1);
    }
    if (explicit_gain) {
      compute_source(gain, model, SliceLookup(grid, f.slices, n + 1, 0.0, &f.trace, nullptr), t1, gd,
                     options.workers);
    }

    double prev_res = std::numeric_limits<double>::infinity();
    int growth = 0;
    int it = 0;
    double res = 0.0;
    bool converged = false;
    while (it < options.picard_max) {
      ++it;
      if (!explicit_gain) {
        f.slices.push_back(iter);
        try {
          compute_source(gain, model, SliceLookup(grid, f.slices, n + 2, 0.0, &f.trace, nullptr), t1, gd,
                         options.workers);
        } catch (...) {
          f.slices.pop_back();
          throw;
        }
        f.slices.pop_back();
      }
      res = 0.0;
      double scale = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        next[j] = A[j] + c[j] * (gd[j] - model.flux(grid.m[j], iter[j]));
        if (!std::isfinite(next[j])) {
          throw SolverError(SolverError::Kind::NonFiniteState,
                            "non-finite field value at step " + std::to_string(step + 1) + " (t = " +
                                std::to_string(t1) + ", node " + std::to_string(j) + ")");
        }
        res = std::max(res, std::abs(next[j] - iter[j]));
        scale = std::max(scale, std::abs(next[j]));
      }
      if (it > 1 && prev_res > 1e3 * std::numeric_limits<double>::epsilon() * scale && std::isfinite(prev_res)) {
        f.picard.max_ratio = std::max(f.picard.max_ratio, res / prev_res);
        ++f.picard.ratio_samples;
      }
      std::swap(iter, next);
      if (res <= options.picard_tol * scale) {
        converged = true;
        break;
      }
      growth = res > prev_res ? growth + 1 : 0;
      if (growth >= 10) {
        throw SolverError(SolverError::Kind::PicardDiverged, "Picard residual grew for 10 iterations at step " +
                                                                 std::to_string(step + 1) + " (t = " +
                                                                 std::to_string(t1) + "); reduce dt");
      }
      prev_res = res;
    }
    if (!converged) {
      throw SolverError(SolverError::Kind::PicardNotConverged,
                        "Picard iteration did not reach tolerance at step " + std::to_string(step + 1) + " (t = " +
                            std::to_string(t1) + "), residual " + std::to_string(res));
    }
    f.picard.iterations.push_back(it);
    f.picard.residuals.push_back(res);
    f.picard.max_iterations = std::max(f.picard.max_iterations, it);
    f.picard.max_residual = std::max(f.picard.max_residual, res);

    f.times.push_back(t1);
    f.slices.push_back(iter);
    f.floor_values.push_back(f.trace.value_at(t1));
    F_prev.swap(F_cur);
    F_cur.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) F_cur[j] = gd[j] - model.flux(grid.m[j], iter[j]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Mild-formulation operators on a solved field

namespace {

// Weights of a composite rule on k+1 equally spaced samples: Simpson, with a 3/8 panel
// at the end when k is odd.
std::vector<double> composite_weights(std::size_t k, double h) {
  std::vector<double> w(k + 1, 0.0);
  if (k == 0) return w;
  if (k == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const std::size_t simpson = k % 2 == 0 ? k : k - 3;
  for (std::size_t i = 0; i + 2 <= simpson; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson != k) {
    const std::size_t i = simpson;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

void check_window(const Field& field, std::size_t n, std::size_t j, std::size_t n0) {
  if (n0 < field.first_step || n0 > n || n >= field.slices.size() || j >= field.grid.size()) {
    throw SolverError(SolverError::Kind::HistoryGap, "operator window must lie in the solved range");
  }
}

}  // namespace

double operator_G(const ValidatedModel& model, const Field& field, std::size_t n, std::size_t j, std::size_t n0) {
  check_window(field, n, j, n0);
  const int order = field.options.quad_order;
  const GainTables gain = make_gain_tables(model, field.grid, order);
  const SliceLookup lk = field.lookup();
  const double I0 = model.rates().delta(0.0) + model.velocity().derivative(0.0);
  const double dt = field.grid.dt;
  const auto w = composite_weights(n - n0, dt);
  double sum = 0.0;
  for (std::size_t k = n0; k <= n; ++k) {
    const long i = static_cast<long>(j) - static_cast<long>(n - k);
    const double t = field.times[k];
    double g;
    if (i < 0) {
      const double x = field.trace.value_at(t);
      g = trace_source(field.trace, I0, t) + model.flux(0.0, x);
    } else {
      g = source_node(gain, model, lk, t, static_cast<std::size_t>(i));
    }
    sum += w[k - n0] * g * bigK(model, static_cast<double>(n - k) * dt, field.grid.m[j], order);
  }
  return sum;
}

double operator_J(const ValidatedModel& model, const Field& field, std::size_t n, std::size_t j, std::size_t n0) {
  check_window(field, n, j, n0);
  const int order = field.options.quad_order;
  const double dt = field.grid.dt;
  const auto w = composite_weights(n - n0, dt);
  double sum = 0.0;
  for (std::size_t k = n0; k <= n; ++k) {
    const long i = static_cast<long>(j) - static_cast<long>(n - k);
    const double l = i < 0 ? model.flux(0.0, field.trace.value_at(field.times[k]))
                           : model.flux(field.grid.m[i], field.slices[k][static_cast<std::size_t>(i)]);
    sum += w[k - n0] * l * bigK(model, static_cast<double>(n - k) * dt, field.grid.m[j], order);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Whole-window Picard sweep

PicardSweep picard_sweep(const ValidatedModel& model, const InitialData& phi, double T, int iterations,
                         const FieldOptions& options) {
  const Setup s = check_step(model, T, options);
  Field base = history_field(model, phi, s, options);
  base.trace = boundary_trace(model, phi, s, options);
  const auto& grid = base.grid;
  const std::size_t nodes = grid.size();
  const std::size_t total = s.Kh + s.steps + 1;
  const GainTables gain = make_gain_tables(model, grid, options.quad_order);
  const Attenuation att = attenuation(model, grid, options.quad_order, false);
  const Stepper stepper{grid, att, s.dt};
  for (std::size_t k = s.Kh + 1; k < total; ++k) base.times.push_back(static_cast<double>(k) * s.dt);

  // Iterate k: slices of N_k on the whole window, and its source F_k.
  std::vector<std::vector<double>> cur = base.slices;
  std::vector<std::vector<double>> F(total, std::vector<double>(nodes, 0.0));

  auto march = [&](std::vector<std::vector<double>>& out, bool with_source) {
    out.resize(s.Kh + 1);
    auto N_at = [&](std::size_t n, long j) {
      return j < 0 ? base.trace.value_at(base.times[n]) : out[n][static_cast<std::size_t>(j)];
    };
    auto F_at = [&](std::size_t n, long j) {
      if (!with_source) return 0.0;
      return j < 0 ? trace_source(base.trace, s.I0, base.times[n]) : F[n][static_cast<std::size_t>(j)];
    };
    for (std::size_t step = 0; step < s.steps; ++step) {
      const std::size_t n = s.Kh + step;
      std::vector<double> v(nodes);
      for (std::size_t j = 0; j < nodes; ++j) {
        double A, c;
        stepper.known(step == 0, n, j, N_at, F_at, A, c);
        v[j] = A + c * (with_source ? F[n + 1][j] : 0.0);
      }
      out.push_back(std::move(v));
    }
  };

  march(cur, false);
  PicardSweep sweep;
  std::vector<double> gd;
  for (int k = 0; k < iterations; ++k) {
    for (std::size_t n = s.Kh; n < total; ++n) {
      compute_source(gain, model, SliceLookup(grid, cur, total, 0.0, &base.trace, nullptr), base.times[n], gd,
                     options.workers);
      for (std::size_t j = 0; j < nodes; ++j) F[n][j] = gd[j] - model.flux(grid.m[j], cur[n][j]);
    }
    std::vector<std::vector<double>> next = base.slices;
    march(next, true);
    double inc = 0.0;
    for (std::size_t n = s.Kh; n < total; ++n)
      for (std::size_t j = 0; j < nodes; ++j) inc = std::max(inc, std::abs(next[n][j] - cur[n][j]));
    sweep.increments.push_back(inc);
    if (sweep.increments.size() >= 2) {
      const double before = sweep.increments[sweep.increments.size() - 2];
      if (before > 1e3 * std::numeric_limits<double>::epsilon()) {
        sweep.ratios.push_back(inc / before);
        sweep.max_ratio = std::max(sweep.max_ratio, inc / before);
      }
    }
    cur.swap(next);
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Proliferating phase

Field reconstruct_P(const ValidatedModel& model, const Field& N, const InitialData& P0) {
  const auto& grid = N.grid;
  const std::size_t nodes = grid.size();
  const int order = N.options.quad_order;
  const double dt = grid.dt;
  const double tau = model.tau_max();
  const std::size_t K = N.first_step;
  if (N.slices.size() <= K) throw SolverError(SolverError::Kind::HistoryGap, "N has no solved slices");

  const GainTables efflux = make_efflux_tables(model, grid, order);
  const Attenuation att = attenuation(model, grid, order, true);
  const Stepper stepper{grid, att, dt};
  const SliceLookup lk = N.lookup();

  const QuadratureRule rule = kernel_rule(model, order);
  const double nu = model.rates().gamma(0.0) + model.velocity().derivative(0.0);
  auto floor_source = [&](double t) {
    double out = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
      out += rule.weights[q] * std::exp(-nu * rule.nodes[q]) * model.flux(0.0, lk.floor(t - rule.nodes[q]));
    return model.flux(0.0, lk.floor(t)) - out;
  };
  auto node_source = [&](std::size_t k, std::vector<double>& out) {
    compute_source(efflux, model, lk, N.times[k], out, N.options.workers);
    for (std::size_t j = 0; j < nodes; ++j) out[j] = model.flux(grid.m[j], N.slices[k][j]) - out[j];
  };

  Field P;
  P.grid = grid;
  P.options = N.options;
  P.t0 = tau;
  P.first_step = 0;
  const std::size_t steps = N.slices.size() - 1 - K;
  std::vector<double> p0(nodes);
  for (std::size_t j = 0; j < nodes; ++j) p0[j] = P0(tau, grid.m[j]);
  P.times.push_back(N.times[K]);
  P.slices.push_back(std::move(p0));
  P.floor_values.push_back(P0(tau, 0.0));

  // S at P slices i-1, i, i+1 (P slice i is N slice K + i).
  std::vector<std::vector<double>> S(steps + 1, std::vector<double>(nodes));
  std::vector<double> S_floor(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    node_source(K + i, S[i]);
    S_floor[i] = floor_source(N.times[K + i]);
  }
  const double e1 = std::exp(-nu * dt), e2 = std::exp(-2.0 * nu * dt);

  auto P_at = [&](std::size_t i, long j) {
    return j < 0 ? P.floor_values[i] : P.slices[i][static_cast<std::size_t>(j)];
  };
  auto S_at = [&](std::size_t i, long j) { return j < 0 ? S_floor[i] : S[i][static_cast<std::size_t>(j)]; };

  for (std::size_t i = 0; i < steps; ++i) {
    const bool first = i == 0;
    std::vector<double> v(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      double A, c;
      stepper.known(first, i, j, P_at, S_at, A, c);
      v[j] = A + c * S[i + 1][j];
    }
    const double pf = first ? P.floor_values[i] * e1 + 0.5 * dt * (S_floor[i] * e1 + S_floor[i + 1])
                            : P.floor_values[i - 1] * e2 +
                                  dt / 3.0 * (S_floor[i - 1] * e2 + 4.0 * S_floor[i] * e1 + S_floor[i + 1]);
    P.times.push_back(N.times[K + i + 1]);
    P.slices.push_back(std::move(v));
    P.floor_values.push_back(pf);
  }
  return P;
}

// ---------------------------------------------------------------------------
// Extinction schedule

double Lambda_inv_alpha(const ValidatedModel& model, double u) {
  const double g1 = model.division().g1();
  if (u <= 0.0) return 0.0;
  const double y = log_h(model, u) + model.tau_min();
  if (y >= 0.0) return g1;
  return std::min(g1, model.division()(maturity_from_log(model, y)));
}

ExtinctionSchedule extinction_schedule(const ValidatedModel& model, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("b must lie in (0, 1]");
  double t0v;
  try {
    t0v = tau0(model);
  } catch (const FlowError&) {
    throw SolverError(SolverError::Kind::NotApplicable, "re-maturation time is unbounded; extinction bound does not apply");
  }
  if (!(model.tau_min() > t0v)) {
    throw SolverError(SolverError::Kind::NotApplicable, "tau_min = " + std::to_string(model.tau_min()) +
                                                            " does not exceed tau0 = " + std::to_string(t0v));
  }
  const double g1 = model.division().g1();
  const double tau = model.tau_max();
  ExtinctionSchedule s;
  double bn = std::min(b, g1);
  double tn = 0.0;
  s.b.push_back(bn);
  s.t.push_back(tn);
  const std::size_t cap = 1000000;
  while (true) {
    const double next = Lambda_inv_alpha(model, bn);
    tn += tau + log_h(model, next) - log_h(model, bn);
    bn = next;
    s.b.push_back(bn);
    s.t.push_back(tn);
    if (bn >= g1) break;
    if (s.b.size() > cap) throw SolverError(SolverError::Kind::NotApplicable, "extinction schedule exceeds 1e6 steps");
  }
  s.M = s.b.size() - 2;
  s.t_bar = tn + tau - log_h(model, g1);
  return s;
}

double extinction_time(const ValidatedModel& model, double b) { return extinction_schedule(model, b).t_bar; }

// ---------------------------------------------------------------------------

FloorSensitivity floor_sensitivity(const ValidatedModel& model, const InitialData& phi, const Field& base) {
  FieldOptions o = base.options;
  o.y_min = base.grid.y_floor() - 2.0;
  const Field low = solve_field(model, phi, base.final_time(), o);
  const std::size_t shift = low.grid.size() - base.grid.size();
  FloorSensitivity r;
  r.y_min = base.grid.y_floor();
  r.y_min_shifted = low.grid.y_floor();
  const std::size_t slices = std::min(base.slices.size(), low.slices.size());
  for (std::size_t k = 0; k < slices; ++k)
    for (std::size_t j = 0; j < base.grid.size(); ++j)
      r.max_difference = std::max(r.max_difference, std::abs(base.slices[k][j] - low.slices[k][j + shift]));
  return r;
}

FloorSensitivity floor_sensitivity(const ValidatedModel& model, const InitialData& phi, double T,
                                   const FieldOptions& options) {
  return floor_sensitivity(model, phi, solve_field(model, phi, T, options));
}

AgreementReport experiment_agreement(const ValidatedModel& model, const InitialData& phi1, const InitialData& phi2,
                                     double b, double T, const FieldOptions& options) {
  AgreementReport r;
  r.t_bar = extinction_time(model, b);
  if (!(T > r.t_bar)) {
    throw SolverError(SolverError::Kind::NotApplicable,
                      "horizon " + std::to_string(T) + " does not exceed t_bar = " + std::to_string(r.t_bar));
  }
  const double tau = model.tau_max();
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 256; ++j) {
      const double t = tau * i / 64.0, m = b * j / 256.0;
      if (phi1(t, m) != phi2(t, m)) {
        throw SolverError(SolverError::Kind::NotApplicable, "initial data differ at maturity " + std::to_string(m) +
                                                                " <= b");
      }
    }
  }
  r.norm = std::max(phi1.sup_norm(tau), phi2.sup_norm(tau));
  r.tolerance = 1e-6 * r.norm;
  const Field f1 = solve_field(model, phi1, T, options);
  const Field f2 = solve_field(model, phi2, T, options);
  for (std::size_t k = 0; k < f1.slices.size(); ++k) {
    double d = 0.0;
    for (std::size_t j = 0; j < f1.grid.size(); ++j) d = std::max(d, std::abs(f1.slices[k][j] - f2.slices[k][j]));
    r.times.push_back(f1.times[k]);
    r.sup_diff.push_back(d);
    if (f1.times[k] >= r.t_bar) r.max_after_t_bar = std::max(r.max_after_t_bar, d);
  }
  r.passed = r.max_after_t_bar < r.tolerance || (r.norm == 0.0 && r.max_after_t_bar == 0.0);
  return r;
}

}  // namespace hemo
