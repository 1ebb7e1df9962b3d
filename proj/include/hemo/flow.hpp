#pragma once

#include "hemo/model.hpp"

#include <stdexcept>

// Maturation characteristics. Everything is expressed through the closed-form
// log-maturity y = ln h(m), in which the backward flow is a unit-speed shift.

namespace hemo {

class FlowError : public std::domain_error {
public:
  enum class Kind { DegenerateMaturity, Unbounded };
  FlowError(Kind kind, const std::string& what) : std::domain_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Log-maturity paired with its maturity.
struct LogMaturity {
  double y;  // ln h(m) <= 0
  double m;
};

/// ln h(m); -infinity at m = 0.
double log_h(const ValidatedModel& model, double m);
/// Inverse of log_h: maturity whose log-maturity is y (y <= 0).
double maturity_from_log(const ValidatedModel& model, double y);

double h(const ValidatedModel& model, double m);
double h_inv(const ValidatedModel& model, double value);

/// pi_s(m) for s <= 0.
double pi(const ValidatedModel& model, double s, double m);

/// Retardation map Delta(a, m) = pi_{-a}(g^{-1}(m)).
double delta(const ValidatedModel& model, double a, double m);

/// Time to mature from m1 to m2 (0 < m1 <= m2 <= 1).
double maturation_time(const ValidatedModel& model, double m1, double m2);

struct Tau0Options {
  int grid_points = 4096;
  double log_span = 64.0;  // search y in [ln h(g(1)) - log_span, ln h(g(1))]
  double cap = 1e6;
};

struct Tau0Result {
  double value;
  double argmax;  // maturity attaining the supremum
};

/// sup over m in (0, g(1)] of maturation_time(m, g^{-1}(m)). Throws FlowError::Unbounded
/// when the time to re-mature grows without bound toward m = 0.
Tau0Result tau0_search(const ValidatedModel& model, const Tau0Options& options = {});
double tau0(const ValidatedModel& model, const Tau0Options& options = {});

}  // namespace hemo
