#pragma once

#include "hemo/dde.hpp"
#include "hemo/experiments.hpp"
#include "hemo/field.hpp"
#include "hemo/initial_data.hpp"
#include "hemo/model.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// JSON run configuration. Every object is checked against its allowed keys before
// any computation starts.

namespace hemo {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DdeSettings {
  double horizon = 60.0;
  double dt = 0.0;  // 0 picks the default boundary step
  InitialData history = InitialData::constant(1.0);  // read at m = 0
  BoundaryGain gain = BoundaryGain::unscaled;
};

struct FieldSettings {
  double horizon = 20.0;
  InitialData initial = InitialData::constant(1.0);
  std::optional<InitialData> P0;
  bool floor_sensitivity = true;
};

struct RunConfig {
  ModelConfig model;
  FieldOptions grid;
  DdeSettings dde;
  FieldSettings field;
  std::optional<DecaySettings> decay;
  std::optional<ExtinctionSettings> extinction;
  std::optional<AgreementSettings> agreement;
  std::optional<EquilibriumSettings> equilibrium;
  std::vector<std::string> criteria{"local", "dde", "structural"};
};

/// Names accepted in report.criteria.
const std::vector<std::string>& known_criteria();

/// Parses a configuration document. Relative paths (gridded initial data) resolve
/// against base_dir. Throws ConfigError naming the byte offset or the field.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

BoundaryGain parse_gain(const std::string& name);
const char* to_string(BoundaryGain gain);

}  // namespace hemo
