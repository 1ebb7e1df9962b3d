#pragma once

#include "hemo/dde.hpp"
#include "hemo/experiments.hpp"
#include "hemo/field.hpp"
#include "hemo/model.hpp"
#include "hemo/stability.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

// CSV and JSON emission. Numbers are written with 17 significant digits so output
// bytes depend only on the computed values.

namespace hemo {

std::string format_number(double v);

/// Header `t,m,<column>`; one row per node of each slice, preceded by the m = 0 trace.
void write_field_csv(const std::filesystem::path& path, const Field& field, const std::string& column);
/// Header `t,x,H`; H is empty when the solution carries no Lyapunov series.
void write_dde_csv(const std::filesystem::path& path, const DdeSolution& sol);

void write_text(const std::filesystem::path& path, const std::string& text);

std::string model_json(const ModelConfig& model);

/// Stability report with every constant; all_hold tells whether the requested criteria hold.
std::string report_json(const StabilityReport& report, const std::vector<std::string>& criteria, bool& all_hold);

std::string verdict_json(const Verdict& verdict);

std::string field_meta_json(const ModelConfig& model, const Field& field, double horizon,
                            const std::optional<FloorSensitivity>& floor);
std::string dde_meta_json(const ModelConfig& model, const DdeSolution& sol, double horizon, BoundaryGain gain);

}  // namespace hemo
