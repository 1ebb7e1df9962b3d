#include "hemo/field_kernels.hpp"

#include "hemo/flow.hpp"
#include "hemo/interp.hpp"
#include "hemo/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hemo {

MaturityGrid make_grid(const ValidatedModel& model, double dt, double y_min) {
  if (!(dt > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(y_min < 0.0)) throw std::invalid_argument("y_min must be negative");
  MaturityGrid g;
  g.dt = dt;
  g.J = static_cast<int>(std::ceil(-y_min / dt - 1e-9));
  g.y.resize(g.J + 1);
  g.m.resize(g.J + 1);
  for (int j = 0; j <= g.J; ++j) {
    g.y[j] = (j - g.J) * dt;
    g.m[j] = j == g.J ? 1.0 : maturity_from_log(model, g.y[j]);
  }
  return g;
}

// ---------------------------------------------------------------------------

SliceLookup::SliceLookup(const MaturityGrid& grid, const std::vector<std::vector<double>>& slices,
                         std::size_t available, double t0, const DdeSolution* trace,
                         const std::vector<double>* floor_values)
    : grid_(grid), slices_(slices), available_(available), t0_(t0), trace_(trace), floor_values_(floor_values) {}

double SliceLookup::floor(double t) const {
  if (trace_ != nullptr && !trace_->times.empty()) return trace_->value_at(t);
  if (floor_values_ == nullptr || floor_values_->empty()) return 0.0;
  const auto& f = *floor_values_;
  const double x = std::clamp((t - t0_) / grid_.dt, 0.0, static_cast<double>(f.size() - 1));
  const std::size_t k = std::min(static_cast<std::size_t>(x), f.size() - 1);
  if (k + 1 >= f.size()) return f.back();
  const double s = x - static_cast<double>(k);
  return f[k] + s * (f[k + 1] - f[k]);
}

double SliceLookup::in_slice(std::size_t k, double y) const {
  const auto& v = slices_[k];
  const double x = (y - grid_.y_floor()) / grid_.dt;
  const double xr = std::round(x);
  if (std::abs(x - xr) < 1e-9) return v[static_cast<std::size_t>(std::clamp(xr, 0.0, static_cast<double>(grid_.J)))];
  const double xc = std::clamp(x, 0.0, static_cast<double>(grid_.J));
  const std::size_t i = std::min(static_cast<std::size_t>(xc), static_cast<std::size_t>(grid_.J - 1));
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = std::min<std::size_t>(grid_.J, i + 2);
  return interp::pchip_uniform(std::span<const double>(v.data() + lo, hi - lo + 1), xc - static_cast<double>(lo));
}

double SliceLookup::operator()(double t, double y) const {
  if (y < grid_.y_floor() - 1e-9 * grid_.dt) return floor(t);
  double x = (t - t0_) / grid_.dt;
  const double xr = std::round(x);
  if (std::abs(x - xr) < 1e-9) x = xr;
  const double last = static_cast<double>(available_ - 1);
  if (x < 0.0 || x > last) {
    throw SolverError(SolverError::Kind::HistoryGap,
                      "field lookup at t = " + std::to_string(t) + " outside the stored slices");
  }
  const std::size_t k = static_cast<std::size_t>(x);
  if (x == static_cast<double>(k)) return in_slice(k, y);
  if (available_ < 4) {
    const double s = x - static_cast<double>(k);
    return (1.0 - s) * in_slice(k, y) + s * in_slice(k + 1, y);
  }
  const std::size_t base = std::min(k == 0 ? 0 : k - 1, available_ - 4);
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i] = in_slice(base + i, y);
  return interp::pchip_uniform(v, x - static_cast<double>(base));
}

// ---------------------------------------------------------------------------

namespace {

GainTables empty_tables(const ValidatedModel& model, const MaturityGrid& grid, int order, QuadratureRule& rule) {
  rule = kernel_rule(model, order);
  GainTables t;
  t.nodes = grid.size();
  t.order = rule.size();
  t.ages = rule.nodes;
  t.prefactor.assign(t.nodes, 0.0);
  t.y_source.assign(t.nodes, 0.0);
  t.weight.assign(t.nodes * t.order, 0.0);
  t.m_source.assign(t.nodes * t.order, 0.0);
  return t;
}

}  // namespace

GainTables make_gain_tables(const ValidatedModel& model, const MaturityGrid& grid, int order) {
  QuadratureRule rule;
  GainTables t = empty_tables(model, grid, order, rule);
  const auto& g = model.division();
  for (std::size_t j = 0; j < t.nodes; ++j) {
    const double slope = g.inverse_derivative(grid.m[j]);
    if (slope == 0.0) continue;
    const double mother = g.inverse(grid.m[j]);
    t.prefactor[j] = 2.0 * slope;
    t.y_source[j] = log_h(model, mother);
    for (std::size_t q = 0; q < t.order; ++q) {
      t.weight[j * t.order + q] = rule.weights[q] * xi(model, rule.nodes[q], mother, order);
      t.m_source[j * t.order + q] = maturity_from_log(model, t.y_source[j] - rule.nodes[q]);
    }
  }
  return t;
}

GainTables make_efflux_tables(const ValidatedModel& model, const MaturityGrid& grid, int order) {
  QuadratureRule rule;
  GainTables t = empty_tables(model, grid, order, rule);
  for (std::size_t j = 0; j < t.nodes; ++j) {
    t.prefactor[j] = 1.0;
    t.y_source[j] = grid.y[j];
    for (std::size_t q = 0; q < t.order; ++q) {
      t.weight[j * t.order + q] = rule.weights[q] * xi(model, rule.nodes[q], grid.m[j], order);
      t.m_source[j * t.order + q] = maturity_from_log(model, grid.y[j] - rule.nodes[q]);
    }
  }
  return t;
}

double source_node(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                   std::size_t j) {
  const double pre = tables.prefactor[j];
  if (pre == 0.0) return 0.0;
  const std::size_t off = j * tables.order;
  double sum = 0.0;
  for (std::size_t q = 0; q < tables.order; ++q) {
    const double a = tables.ages[q];
    const double x = lookup(t - a, tables.y_source[j] - a);
    sum += tables.weight[off + q] * model.flux(tables.m_source[off + q], x);
  }
  return pre * sum;
}

void source_serial(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                   std::span<double> out) {
  for (std::size_t j = 0; j < tables.nodes; ++j) out[j] = source_node(tables, model, lookup, t, j);
}

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void source_parallel(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                     std::span<double> out, int workers) {
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const long n = static_cast<long>(tables.nodes);
  // Exceptions cannot cross the parallel region; keep the first one and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long j = 0; j < n; ++j) {
    try {
      out[j] = source_node(tables, model, lookup, t, static_cast<std::size_t>(j));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
#else
  (void)workers;
  source_serial(tables, model, lookup, t, out);
#endif
}

}  // namespace hemo
