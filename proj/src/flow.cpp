#include "hemo/flow.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hemo {

namespace {

bool is_linear(const VelocityProfile& v) {
  return v.family == VelocityProfile::Family::linear || v.exponent == 1.0;
}

double linear_rate(const VelocityProfile& v) {
  return v.family == VelocityProfile::Family::linear ? v.rate : v.coefficient;
}

}  // namespace

double log_h(const ValidatedModel& model, double m) {
  if (m <= 0.0) return -std::numeric_limits<double>::infinity();
  if (m >= 1.0) return 0.0;
  const auto& v = model.velocity();
  if (is_linear(v)) return std::log(m) / linear_rate(v);
  const double p1 = v.exponent - 1.0;
  return -(std::pow(m, -p1) - 1.0) / (v.coefficient * p1);
}

double maturity_from_log(const ValidatedModel& model, double y) {
  if (y >= 0.0) return 1.0;
  if (std::isinf(y)) return 0.0;
  const auto& v = model.velocity();
  if (is_linear(v)) return std::exp(linear_rate(v) * y);
  const double p1 = v.exponent - 1.0;
  return std::pow(1.0 - v.coefficient * p1 * y, -1.0 / p1);
}

double h(const ValidatedModel& model, double m) {
  if (m <= 0.0) return 0.0;
  if (m >= 1.0) return 1.0;
  return std::exp(log_h(model, m));
}

double h_inv(const ValidatedModel& model, double value) {
  if (value <= 0.0) return 0.0;
  if (value >= 1.0) return 1.0;
  return maturity_from_log(model, std::log(value));
}

double pi(const ValidatedModel& model, double s, double m) {
  if (m <= 0.0) return 0.0;
  if (s == 0.0) return m;
  return maturity_from_log(model, log_h(model, m) + s);
}

double delta(const ValidatedModel& model, double a, double m) {
  return pi(model, -a, model.division().inverse(m));
}

double maturation_time(const ValidatedModel& model, double m1, double m2) {
  if (m1 <= 0.0) throw FlowError(FlowError::Kind::DegenerateMaturity, "maturation time from m = 0 diverges");
  if (m1 == m2) return 0.0;
  return log_h(model, m2) - log_h(model, m1);
}

Tau0Result tau0_search(const ValidatedModel& model, const Tau0Options& opt) {
  const double g1 = model.division().g1();
  const double y_top = log_h(model, g1);
  const double y_lo = y_top - opt.log_span;
  auto remature = [&](double y) {
    const double m = maturity_from_log(model, y);
    return log_h(model, model.division().inverse(m)) - y;
  };

  const int n = opt.grid_points;
  std::vector<double> ys(n), vals(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    ys[i] = y_lo + (y_top - y_lo) * i / (n - 1);
    vals[i] = remature(ys[i]);
    if (!std::isfinite(vals[i]) || vals[i] > opt.cap) {
      throw FlowError(FlowError::Kind::Unbounded, "re-maturation time exceeds cap; tau0 unbounded");
    }
    if (vals[i] > vals[best]) best = i;  // strict: ties keep the smaller maturity
  }

  // Growth toward m -> 0 means the supremum is not attained on any compact range.
  const double tol = 1e-12 * (1.0 + std::abs(vals[0]));
  if (best == 0) {
    const int probe = std::min(n - 1, std::max(1, n / 64));
    if (vals[0] > vals[probe] + tol) {
      throw FlowError(FlowError::Kind::Unbounded, "re-maturation time grows as m -> 0; tau0 unbounded");
    }
  }

  double y_best = ys[best];
  double v_best = vals[best];
  if (best > 0 && best < n - 1) {
    // Golden-section refinement on the bracketing cell pair.
    double a = ys[best - 1], b = ys[best + 1];
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = remature(c), fd = remature(d);
    for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
      if (fc >= fd) {
        b = d; d = c; fd = fc;
        c = b - r * (b - a); fc = remature(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + r * (b - a); fd = remature(d);
      }
    }
    const double y_ref = 0.5 * (a + b);
    const double v_ref = remature(y_ref);
    if (v_ref > v_best) {
      v_best = v_ref;
      y_best = y_ref;
    }
  }
  return {v_best, maturity_from_log(model, y_best)};
}

double tau0(const ValidatedModel& model, const Tau0Options& options) { return tau0_search(model, options).value; }

}  // namespace hemo
