#include "hemo/output.hpp"

#include "hemo/config.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hemo {

using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

ordered_json coefficient_json(const Coefficient& c) {
  if (c.family == Coefficient::Family::constant) return {{"family", "constant"}, {"value", c.intercept}};
  return {{"family", "affine"}, {"intercept", c.intercept}, {"slope", c.slope}};
}

ordered_json criterion_json(const Criterion& c) {
  return {{"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}};
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json grid_json(const Field& f) {
  return {{"dt", f.grid.dt},
          {"J", f.grid.J},
          {"nodes", f.grid.size()},
          {"y_min", f.grid.y_floor()},
          {"quad_order", f.options.quad_order},
          {"picard_tol", f.options.picard_tol},
          {"picard_max", f.options.picard_max},
          {"floor_gain", to_string(f.options.floor_gain)}};
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const Field& field, const std::string& column) {
  auto out = open_out(path);
  out << "t,m," << column << '\n';
  std::string line;
  for (std::size_t k = 0; k < field.slices.size(); ++k) {
    const std::string t = format_number(field.times[k]);
    out << t << ',' << format_number(0.0) << ',' << format_number(field.floor_values[k]) << '\n';
    for (std::size_t j = 0; j < field.grid.size(); ++j) {
      out << t << ',' << format_number(field.grid.m[j]) << ',' << format_number(field.slices[k][j]) << '\n';
    }
  }
}

void write_dde_csv(const std::filesystem::path& path, const DdeSolution& sol) {
  auto out = open_out(path);
  out << "t,x,H\n";
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    out << format_number(sol.times[i]) << ',' << format_number(sol.values[i]) << ',';
    if (i < sol.lyapunov.size()) out << format_number(sol.lyapunov[i]);
    out << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

std::string model_json(const ModelConfig& m) {
  ordered_json v;
  if (m.velocity.family == VelocityProfile::Family::linear) {
    v = {{"family", "linear"}, {"rate", m.velocity.rate}};
  } else {
    v = {{"family", "power"}, {"coefficient", m.velocity.coefficient}, {"exponent", m.velocity.exponent}};
  }
  ordered_json j = {
      {"velocity", v},
      {"division", {{"family", "linear"}, {"ratio", m.division.ratio}}},
      {"rates", {{"delta", coefficient_json(m.rates.delta)}, {"gamma", coefficient_json(m.rates.gamma)}}},
      {"kernel", {{"tau_min", m.kernel.tau_min}, {"tau_max", m.kernel.tau_max}, {"shape", m.kernel.shape}}},
      {"beta", {{"a", coefficient_json(m.beta.a)}, {"b", coefficient_json(m.beta.b)}, {"exponent", m.beta.exponent}}}};
  return j.dump();
}

std::string report_json(const StabilityReport& r, const std::vector<std::string>& criteria, bool& all_hold) {
  const auto& c = r.constants;
  ordered_json constants = {{"I", c.I},
                            {"I0", c.I0},
                            {"nu", c.nu},
                            {"z", c.z},
                            {"zeta_tilde", c.zeta_tilde},
                            {"tau0", optional_json(c.tau0)},
                            {"L", c.L},
                            {"alpha", optional_json(c.alpha)},
                            {"rho", optional_json(c.rho)},
                            {"theta", optional_json(c.theta)},
                            {"beta0_at_zero", c.beta0_at_zero},
                            {"ginv_slope_at_zero", c.ginv_slope_at_zero}};
  ordered_json crit = {{"local", criterion_json(r.local_exp_stable)},
                       {"dde", criterion_json(r.dde_global_stable)},
                       {"structural", criterion_json(r.structural)},
                       {"global_lipschitz", criterion_json(r.global_lipschitz_stable)},
                       {"global", {{"holds", r.global_on_nonnegative_data}}}};
  crit["structural"]["tau0_finite"] = r.tau0_finite;

  all_hold = true;
  for (const auto& name : criteria) all_hold = all_hold && crit.at(name).at("holds").get<bool>();

  ordered_json j = {{"constants", constants},
                    {"criteria", crit},
                    {"requested", criteria},
                    {"all_requested_hold", all_hold},
                    {"equilibrium", optional_json(r.equilibrium)},
                    {"equilibrium_residual", optional_json(r.equilibrium_residual)},
                    {"notes", r.notes}};
  return j.dump(2);
}

std::string verdict_json(const Verdict& v) {
  ordered_json measured = ordered_json::object(), expected = ordered_json::object(),
               tolerance = ordered_json::object(), relation = ordered_json::object(), checks = ordered_json::object();
  for (const auto& c : v.checks) {
    measured[c.name] = c.measured;
    expected[c.name] = c.expected;
    tolerance[c.name] = c.tolerance;
    relation[c.name] = c.relation;
    checks[c.name] = c.passed;
  }
  ordered_json j = {{"experiment", v.experiment},
                    {"verdict", v.passed() ? "pass" : "fail"},
                    {"applicable", v.applicable},
                    {"measured", measured},
                    {"expected", expected},
                    {"tolerance", tolerance},
                    {"relation", relation},
                    {"checks", checks}};
  if (!v.applicable) j["reason"] = v.reason;
  return j.dump(2);
}

std::string field_meta_json(const ModelConfig& model, const Field& f, double horizon,
                            const std::optional<FloorSensitivity>& floor) {
  ordered_json j = {{"model", ordered_json::parse(model_json(model))},
                    {"grid", grid_json(f)},
                    {"horizon", horizon},
                    {"t0", f.t0},
                    {"slices", f.slices.size()},
                    {"first_step", f.first_step}};
  if (!f.picard.iterations.empty()) {
    j["picard"] = {{"max_iterations", f.picard.max_iterations},
                   {"max_residual", f.picard.max_residual},
                   {"max_ratio", f.picard.max_ratio},
                   {"ratio_samples", f.picard.ratio_samples}};
  }
  if (floor) {
    j["floor_sensitivity"] = {{"y_min", floor->y_min},
                              {"y_min_shifted", floor->y_min_shifted},
                              {"max_difference", floor->max_difference}};
  }
  return j.dump(2);
}

std::string dde_meta_json(const ModelConfig& model, const DdeSolution& sol, double horizon, BoundaryGain gain) {
  ordered_json j = {{"model", ordered_json::parse(model_json(model))},
                    {"horizon", horizon},
                    {"dt", sol.dt},
                    {"quad_order", sol.quad_order},
                    {"boundary_gain", to_string(gain)},
                    {"gain_scale", sol.gain_scale},
                    {"samples", sol.times.size()}};
  return j.dump(2);
}

}  // namespace hemo
