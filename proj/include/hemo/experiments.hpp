#pragma once

#include "hemo/dde.hpp"
#include "hemo/field.hpp"
#include "hemo/initial_data.hpp"
#include "hemo/model.hpp"

#include <string>
#include <vector>

// Scripted scenarios, each checking one stability or extinction statement.

namespace hemo {

struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;  // how measured is compared with expected
  bool passed = false;
};

struct Verdict {
  std::string experiment;
  bool applicable = true;
  std::string reason;  // set when not applicable
  std::vector<Check> checks;

  bool passed() const;
};

struct DecaySettings {
  double horizon = 20.0;
  InitialData phi = InitialData::constant(1.0);
  double sweep_window = 8.0;  // whole-window Picard check over [tau_max, tau_max + window]
  int sweep_iterations = 8;
};

struct ExtinctionSettings {
  double b = 0.1;
  InitialData phi = InitialData::bump(1.0, 0.1, 1.0);
  double offset = 0.5;  // measured from t_bar + offset to t_bar + offset + 0.5
};

struct AgreementSettings {
  double b = 0.1;
  InitialData phi1 = InitialData::constant(1.0);
  InitialData phi2 = InitialData::constant(1.0).plus(InitialData::bump(1.0, 0.1, 1.0));
  double horizon = 20.0;
};

struct EquilibriumSettings {
  double horizon = 50.0;
  double dt = 0.0;  // 0 picks the default boundary step
  double tolerance = 1e-6;
  BoundaryGain gain = BoundaryGain::unscaled;
};

/// Default boundary step: largest tau_max / n not exceeding min(tau_min/4, tau_max/64).
double default_dde_step(const ValidatedModel& model);

Verdict run_decay(const ValidatedModel& model, const DecaySettings& s, const FieldOptions& options = {});
Verdict run_extinction(const ValidatedModel& model, const ExtinctionSettings& s, const FieldOptions& options = {});
Verdict run_agreement(const ValidatedModel& model, const AgreementSettings& s, const FieldOptions& options = {});
Verdict run_equilibrium(const ValidatedModel& model, const EquilibriumSettings& s);

}  // namespace hemo
