#pragma once

#include "hemo/kernels.hpp"
#include "hemo/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hemo {

/// One sufficient condition of the form lhs < rhs.
struct Criterion {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
};

struct StabilityReport {
  DerivedConstants constants;
  Criterion local_exp_stable;         // L(2 zeta_tilde + 1) < I
  Criterion dde_global_stable;        // (2z - 1) beta0(0) < I0
  Criterion structural;               // tau0 < tau_min
  bool tau0_finite = false;           // re-maturation time bounded
  Criterion global_lipschitz_stable;  // same inequality with the global Lipschitz constant
  bool global_on_nonnegative_data = false;  // local and dde and structural together
  std::optional<double> equilibrium;
  std::optional<double> equilibrium_residual;
  std::vector<std::string> notes;
};

StabilityReport evaluate(const ValidatedModel& model);

/// Positive constant solution x* of the boundary equation, I0 = (2z - 1) beta0(x*).
std::optional<double> dde_equilibrium(const ValidatedModel& model);
/// Same with an explicit z (lets callers use the trace-consistent boundary gain).
std::optional<double> dde_equilibrium(const ValidatedModel& model, double z);

}  // namespace hemo
