#pragma once

#include "hemo/dde.hpp"
#include "hemo/field_kernels.hpp"
#include "hemo/initial_data.hpp"
#include "hemo/model.hpp"

#include <cstddef>
#include <vector>

// N(t, m) on a grid aligned with the characteristics: in y = ln h(m) the backward flow
// is a unit-speed shift, so with dy = dt node j at t + dt comes from node j - 1 at t.
// Along each characteristic the resting density obeys
//   dN/dt = -(delta + V') N - lambda(m, N) + Gd(t, m),
// with Gd the delayed division gain. The linear part is integrated exactly through K;
// the rest by the trapezoid rule on the first step and two-step Simpson afterwards.
// The lambda(m, N) term at the new time is implicit and resolved by Picard iteration.

namespace hemo {

struct FieldOptions {
  double y_min = -12.0;
  double dt = 0.0;  // 0 picks the default step
  int quad_order = 32;
  double picard_tol = 1e-11;  // relative to sup |N| of the new slice
  int picard_max = 60;
  int workers = 1;  // 1 runs the serial kernel; otherwise OpenMP (<= 0: all threads)
  BoundaryGain floor_gain = BoundaryGain::trace;
};

/// Largest step tau_max / n not exceeding min(tau_min, tau_max/32) (tau_max/64 when tau_min = 0).
double default_field_step(const ValidatedModel& model);

struct PicardStats {
  std::vector<int> iterations;    // per solved step
  std::vector<double> residuals;  // final residual per step
  double max_ratio = 0.0;         // largest ratio of consecutive increments
  std::size_t ratio_samples = 0;
  int max_iterations = 0;
  double max_residual = 0.0;
};

struct Field {
  MaturityGrid grid;
  double t0 = 0.0;  // time of slice 0
  std::vector<double> times;
  std::vector<std::vector<double>> slices;
  std::vector<double> floor_values;  // m -> 0 trace at each slice
  std::size_t first_step = 0;        // first slice at or after tau_max
  DdeSolution trace;                 // boundary trace (empty for reconstructed P)
  PicardStats picard;
  FieldOptions options;

  double node(std::size_t k, std::size_t j) const { return slices[k][j]; }
  SliceLookup lookup() const;
  double value(const ValidatedModel& model, double t, double m) const;
  double sup_abs(std::size_t k) const;
  double final_time() const { return times.back(); }
};

Field solve_field(const ValidatedModel& model, const InitialData& phi, double T, const FieldOptions& options = {});

/// Gain and loss operators of the mild formulation, evaluated on a solved field along
/// the characteristic ending at node j of slice n, over slices [n0, n]:
///   G = 2 \int_{t0}^{t} \int zeta(a, pi m) lambda(N(s-a, Delta(a, pi m))) da K(t-s, m) ds,
///   J = \int_{t0}^{t} K(t-s, m) lambda(pi m, N(s, pi m)) ds, pi = pi_{-(t-s)}.
double operator_G(const ValidatedModel& model, const Field& field, std::size_t n, std::size_t j, std::size_t n0);
double operator_J(const ValidatedModel& model, const Field& field, std::size_t n, std::size_t j, std::size_t n0);

/// Proliferating density P from a solved N, given P at t = tau_max.
Field reconstruct_P(const ValidatedModel& model, const Field& N, const InitialData& P0);

/// Whole-window Picard iteration N_{k+1} = N_0 + G(N_k) - J(N_k) over [tau_max, T], with
/// N_0 the transported initial slice. Increments are sup-norm over the window.
struct PicardSweep {
  std::vector<double> increments;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};
PicardSweep picard_sweep(const ValidatedModel& model, const InitialData& phi, double T, int iterations,
                         const FieldOptions& options = {});

// ---------------------------------------------------------------------------
// Finite-time extinction

/// Inverse of m -> Delta(tau_min, m) on [0, pi_{-tau_min}(1)], equal to g(1) above.
double Lambda_inv_alpha(const ValidatedModel& model, double u);

struct ExtinctionSchedule {
  std::vector<double> b;  // b_0 .. b_{M+1}
  std::vector<double> t;  // t_0 .. t_{M+1}
  std::size_t M = 0;
  double t_bar = 0.0;
};

/// Throws SolverError::NotApplicable unless tau_min > tau0.
ExtinctionSchedule extinction_schedule(const ValidatedModel& model, double b);
double extinction_time(const ValidatedModel& model, double b);

struct FloorSensitivity {
  double y_min = 0.0;
  double y_min_shifted = 0.0;
  double max_difference = 0.0;  // over shared nodes and slices
};

/// Reruns with the floor lowered by 2 and compares.
FloorSensitivity floor_sensitivity(const ValidatedModel& model, const InitialData& phi, double T,
                                   const FieldOptions& options = {});
FloorSensitivity floor_sensitivity(const ValidatedModel& model, const InitialData& phi, const Field& base);

struct AgreementReport {
  double t_bar = 0.0;
  double norm = 0.0;
  double tolerance = 0.0;
  std::vector<double> times;
  std::vector<double> sup_diff;
  double max_after_t_bar = 0.0;
  bool passed = false;
};

/// Solves from phi1 and phi2 (equal on m <= b) and compares for t >= t_bar.
AgreementReport experiment_agreement(const ValidatedModel& model, const InitialData& phi1, const InitialData& phi2,
                                     double b, double T, const FieldOptions& options = {});

}  // namespace hemo
