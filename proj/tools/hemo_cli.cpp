// Command-line front end: stability report, boundary and field simulation, experiments.
// Exit codes: 0 ok, 2 config error, 3 criterion fails, 4 solver failure.

#include "hemo/config.hpp"
#include "hemo/dde.hpp"
#include "hemo/experiments.hpp"
#include "hemo/field.hpp"
#include "hemo/flow.hpp"
#include "hemo/kernels.hpp"
#include "hemo/output.hpp"
#include "hemo/stability.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace hemo;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kCriterionFails = 3;
constexpr int kSolverFailure = 4;

struct Options {
  std::string config;
  std::string experiment;
  std::string out = ".";
  bool out_given = false;
  std::optional<int> workers;
};

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

RunConfig load(const Options& o) {
  RunConfig rc = load_config(o.config);
  if (o.workers) rc.grid.workers = *o.workers;
  return rc;
}

int cmd_report(const Options& o) {
  const RunConfig rc = load(o);
  const ValidatedModel model = validate(rc.model);
  const StabilityReport report = evaluate(model);
  bool all_hold = false;
  const std::string text = report_json(report, rc.criteria, all_hold);
  std::cout << text << '\n';
  if (o.out_given) write_text(prepare_out(o) / "report.json", text);
  return all_hold ? kOk : kCriterionFails;
}

int cmd_simulate_dde(const Options& o) {
  const RunConfig rc = load(o);
  const ValidatedModel model = validate(rc.model);
  const double tau = model.tau_max();
  const double dt = rc.dde.dt > 0.0 ? rc.dde.dt : default_dde_step(model);
  const int intervals = std::max(8, static_cast<int>(std::ceil(tau / dt - 1e-9)));
  const InitialData& phi = rc.dde.history;
  const ScalarHistory psi = ScalarHistory::from_function(
      tau, intervals, [&](double t) { return phi(t, 0.0); }, [&](double t) { return phi.dt(t, 0.0); });
  DdeOptions opt;
  opt.gain = rc.dde.gain;
  opt.quad_order = rc.grid.quad_order;
  opt.record_lyapunov = true;
  const DdeSolution sol = integrate(model, psi, rc.dde.horizon, dt, opt);

  const fs::path dir = prepare_out(o);
  write_dde_csv(dir / "dde.csv", sol);
  write_text(dir / "dde.meta.json", dde_meta_json(rc.model, sol, rc.dde.horizon, rc.dde.gain));
  std::cout << "dde: " << sol.times.size() << " samples, x(" << format_number(sol.final_time())
            << ") = " << format_number(sol.final_value()) << ", written to " << (dir / "dde.csv").string() << '\n';
  return kOk;
}

int cmd_simulate_field(const Options& o) {
  const RunConfig rc = load(o);
  const ValidatedModel model = validate(rc.model);
  const Field field = solve_field(model, rc.field.initial, rc.field.horizon, rc.grid);
  std::optional<FloorSensitivity> floor;
  if (rc.field.floor_sensitivity) floor = floor_sensitivity(model, rc.field.initial, field);

  const fs::path dir = prepare_out(o);
  write_field_csv(dir / "field.csv", field, "N");
  write_text(dir / "field.meta.json", field_meta_json(rc.model, field, rc.field.horizon, floor));
  std::cout << "field: " << field.slices.size() << " slices x " << field.grid.size() << " nodes, written to "
            << (dir / "field.csv").string() << '\n';
  if (floor) std::cout << "floor sensitivity (y_min - 2): " << format_number(floor->max_difference) << '\n';

  if (rc.field.P0) {
    const Field P = reconstruct_P(model, field, *rc.field.P0);
    write_field_csv(dir / "P.csv", P, "P");
    write_text(dir / "P.meta.json", field_meta_json(rc.model, P, rc.field.horizon, std::nullopt));
    std::cout << "P: written to " << (dir / "P.csv").string() << '\n';
  }
  return kOk;
}

int cmd_experiment(const Options& o) {
  const RunConfig rc = load(o);
  const ValidatedModel model = validate(rc.model);
  auto missing = [&] { return ConfigError("experiments." + o.experiment + ": block missing from config"); };
  Verdict v;
  if (o.experiment == "decay") {
    if (!rc.decay) throw missing();
    v = run_decay(model, *rc.decay, rc.grid);
  } else if (o.experiment == "extinction") {
    if (!rc.extinction) throw missing();
    v = run_extinction(model, *rc.extinction, rc.grid);
  } else if (o.experiment == "agreement") {
    if (!rc.agreement) throw missing();
    v = run_agreement(model, *rc.agreement, rc.grid);
  } else {
    if (!rc.equilibrium) throw missing();
    v = run_equilibrium(model, *rc.equilibrium);
  }
  const std::string text = verdict_json(v);
  std::cout << text << '\n';
  if (o.out_given) write_text(prepare_out(o) / (o.experiment + ".json"), text);
  return v.passed() ? kOk : kCriterionFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maturity-structured blood cell production model: stability report and simulations"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --out and --workers follow the subcommand
  Options o;
  auto* out = app.add_option("--out", o.out, "Output directory");
  app.add_option_function<int>(
      "--workers", [&](int w) { o.workers = w; }, "Worker threads for the field kernel (1 = serial, 0 = all)");

  auto* report = app.add_subcommand("report", "Evaluate every stability criterion and print the JSON report");
  report->add_option("config", o.config, "Config file")->required();
  auto* sim_dde = app.add_subcommand("simulate-dde", "Integrate the boundary delay equation, write dde.csv");
  sim_dde->add_option("config", o.config, "Config file")->required();
  auto* sim_field = app.add_subcommand("simulate-field", "Solve N(t,m) on the characteristic grid, write field.csv");
  sim_field->add_option("config", o.config, "Config file")->required();
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment and print its verdict");
  experiment->add_option("name", o.experiment, "decay, extinction, agreement or equilibrium")
      ->required()
      ->check(CLI::IsMember({"decay", "extinction", "agreement", "equilibrium"}));
  experiment->add_option("config", o.config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  o.out_given = out->count() > 0;

  try {
    if (report->parsed()) return cmd_report(o);
    if (sim_dde->parsed()) return cmd_simulate_dde(o);
    if (sim_field->parsed()) return cmd_simulate_field(o);
    return cmd_experiment(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ModelError& e) {
    std::cerr << "config error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kConfigError;
  } catch (const InitialDataError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}
