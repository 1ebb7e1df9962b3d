#pragma once

#include "hemo/model.hpp"
#include "hemo/quadrature.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Boundary delay equation for x(t) = N(t, 0):
//   x' = -(I0 + beta0(x)) x + 2 s \int Z(a) beta0(x(t-a)) x(t-a) da,
// integrated by the method of steps with classical RK4.

namespace hemo {

class SolverError : public std::runtime_error {
public:
  enum class Kind { StepTooLarge, NonFiniteState, PicardDiverged, PicardNotConverged, HistoryGap, NotApplicable, DegenerateSeries };
  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

const char* to_string(SolverError::Kind kind);

/// Scale s applied to the boundary gain. `unscaled` uses Z(a) = e^{-nu a} k(a) as written;
/// `trace` multiplies by (g^{-1})'(0), which makes x(t) the m -> 0 trace of the field.
enum class BoundaryGain { unscaled, trace };

/// Discretized boundary kernel: ages a_q and weights w_q ~ s Z(a_q) da.
struct BoundaryKernel {
  std::vector<double> ages;
  std::vector<double> weights;
  double gain_scale = 1.0;
  int order = 32;

  double z() const;  // \sum w_q, including the gain scale
};

BoundaryKernel make_boundary_kernel(const ValidatedModel& model, BoundaryGain gain = BoundaryGain::unscaled, int order = 32);

/// Scalar history on [0, tau_max], uniformly sampled with stored slopes; cubic
/// Hermite between samples.
class ScalarHistory {
public:
  ScalarHistory() = default;
  ScalarHistory(double tau_max, std::vector<double> values, std::vector<double> slopes);

  static ScalarHistory constant(double tau_max, double value, int intervals = 64);
  static ScalarHistory from_function(double tau_max, int intervals, const std::function<double(double)>& f,
                                     const std::function<double(double)>& df);
  /// Slopes estimated by finite differences of the samples.
  static ScalarHistory from_samples(double tau_max, std::vector<double> values);

  double tau_max() const noexcept { return tau_max_; }
  double step() const noexcept { return step_; }
  int intervals() const noexcept { return static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }

  double value(double t) const;
  double slope(double t) const;

private:
  double tau_max_ = 0.0;
  double step_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

struct DdeOptions {
  BoundaryGain gain = BoundaryGain::unscaled;
  int quad_order = 32;
  bool record_lyapunov = false;
};

struct DdeSolution {
  double tau_max = 0.0;
  double dt = 0.0;
  int quad_order = 32;
  double gain_scale = 1.0;
  ScalarHistory history;
  std::vector<double> times;   // tau_max, tau_max + dt, ...
  std::vector<double> values;
  std::vector<double> slopes;  // right-hand side at each stored time
  std::vector<double> lyapunov;  // optional H(x_t) at each stored time

  double value_at(double t) const;
  double slope_at(double t) const;
  double final_time() const { return times.back(); }
  double final_value() const { return values.back(); }
  /// Window x(t_end - tau_max + s), s in [0, tau_max], sampled on the solver grid.
  ScalarHistory window(double t_end) const;
};

/// Integrates from tau_max to (at least) T. Requires dt <= tau_min/4 (tau_min > 0) or
/// dt <= tau_max/64, and T > tau_max.
DdeSolution integrate(const ValidatedModel& model, const ScalarHistory& psi, double T, double dt,
                      const DdeOptions& options = {});

/// Same with a prebuilt kernel (lets callers share one across runs).
DdeSolution integrate(const ValidatedModel& model, const BoundaryKernel& kernel, const ScalarHistory& psi, double T,
                      double dt, bool record_lyapunov = false);

/// Antiderivative of lambda(x) = x beta0(x) from 0.
double lambda_antideriv(const ValidatedModel& model, double x);

/// Lyapunov functional H(window) = Lambda(psi(tau)) + \int Z(a) \int_{tau-a}^{tau} lambda^2(psi).
double lyapunov_H(const ValidatedModel& model, const BoundaryKernel& kernel, const ScalarHistory& window);
double lyapunov_H(const ValidatedModel& model, const ScalarHistory& window);

struct MonotonicityReport {
  std::vector<double> times;
  std::vector<double> values;
  double max_increase = 0.0;
  double tolerance = 0.0;
  bool criterion_holds = false;  // I0 > (2z - 1) beta0(0) for the kernel in use
  bool asserted = false;
  bool passed = true;
};

/// Samples H along the trajectory at stride tau_max/8 and checks it is nonincreasing
/// when the global stability criterion holds.
MonotonicityReport check_H_monotone(const ValidatedModel& model, const DdeSolution& sol);

/// Least-squares exponential decay rate of |x| over the last half of the series.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace hemo
