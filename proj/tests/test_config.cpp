#include "doctest.h"

#include "hemo/config.hpp"
#include "hemo/output.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hemo;
namespace fs = std::filesystem;

namespace {

const char* kModel = R"("model": {
    "velocity": {"family": "linear", "rate": 1.0},
    "division": {"family": "linear", "ratio": 0.5},
    "rates": {"delta": 1.0, "gamma": {"family": "constant", "value": 0.0}},
    "kernel": {"tau_min": 1.0, "tau_max": 2.0, "shape": 2.0},
    "beta": {"a": 0.5, "b": {"family": "affine", "intercept": 1.0, "slope": 0.0}}
  })";

std::string doc(const std::string& extra = "") {
  return std::string("{") + kModel + (extra.empty() ? "" : ", " + extra) + "}";
}

std::string error_of(const std::string& text, const fs::path& base = ".") {
  try {
    parse_config(text, base);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("reference config files parse") {
  const RunConfig a = load_config(fs::path(HEMO_CONFIG_DIR) / "cfg_a.json");
  CHECK(a.model.kernel.tau_max == 2.0);
  CHECK(a.model.beta.a(0.0) == 0.5);
  CHECK(a.decay.has_value());
  CHECK(a.extinction.has_value());
  CHECK(a.extinction->b == 0.1);
  CHECK(a.criteria == std::vector<std::string>{"local", "dde", "structural"});
  const RunConfig b = load_config(fs::path(HEMO_CONFIG_DIR) / "cfg_b.json");
  CHECK(b.model.velocity.rate == 0.1);
  CHECK(b.model.rates.delta(0.0) == 0.1);
}

TEST_CASE("plain numbers stand for constant coefficients") {
  const RunConfig rc = parse_config(doc());
  CHECK(rc.model.rates.delta.family == Coefficient::Family::constant);
  CHECK(rc.model.rates.delta(0.3) == 1.0);
  CHECK(rc.model.beta.exponent == 1.0);
  CHECK(rc.grid.y_min == -12.0);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(error_of(doc(R"("grid": {"dx": 0.1})")).find("grid.dx: unknown key") != std::string::npos);
  CHECK(error_of(doc(R"("extra": 1)")).find("extra: unknown key") != std::string::npos);
  CHECK(error_of(doc(R"("experiments": {"decay": {"horizon": 5, "rate": 1}})"))
            .find("experiments.decay.rate") != std::string::npos);
}

TEST_CASE("malformed JSON names the byte offset") {
  const std::string e = error_of("{\"model\": [1, 2,, 3]}");
  CHECK(e.find("malformed JSON at byte") != std::string::npos);
}

TEST_CASE("bad values are reported") {
  CHECK(error_of(doc(R"("grid": {"quad_order": 1})")).find("grid.quad_order") != std::string::npos);
  CHECK(error_of(doc(R"("dde": {"boundary_gain": "other"})")).find("boundary_gain") != std::string::npos);
  CHECK(error_of(doc(R"("report": {"criteria": ["local", "nope"]})")).find("nope") != std::string::npos);
  CHECK(error_of(doc(R"("field": {"initial": {"family": "spline"}})")).find("field.initial.family") != std::string::npos);
  CHECK(error_of("{}").find("model") != std::string::npos);
}

TEST_CASE("initial-data families") {
  const RunConfig rc = parse_config(doc(R"("field": {"initial": [
      {"family": "product", "c0": 2.0, "c1": 1.0, "d0": 0.0, "d1": 1.0},
      {"family": "bump", "amplitude": 3.0, "lo": 0.2, "hi": 0.6, "base": 0.5},
      {"family": "truncated", "b": 0.3, "of": {"family": "product", "d0": 0.0, "d1": 1.0}}
    ]})"));
  const InitialData& phi = rc.field.initial;
  const double t = 1.0, m = 0.4;
  const double want = (2.0 + t) * m + 0.5 + 3.0 * std::pow(std::sin(M_PI * 0.5), 2) + 0.3;
  CHECK(phi(t, m) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("gridded initial data resolve relative to the config file") {
  const fs::path dir = fs::temp_directory_path() / "hemo_test_config_gridded";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "phi.csv");
    out << "t,m,phi\n";
    for (double t : {0.0, 1.0, 2.0})
      for (double m : {0.0, 0.25, 0.5, 0.75, 1.0}) out << t << "," << m << "," << (1.0 + t) * (2.0 - m) << "\n";
  }
  {
    std::ofstream out(dir / "run.json");
    out << doc(R"("field": {"initial": {"family": "gridded", "path": "phi.csv"}})");
  }
  const RunConfig rc = load_config(dir / "run.json");
  CHECK(rc.field.initial(1.0, 0.25) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(rc.field.initial(0.5, 0.5) == doctest::Approx(2.25).epsilon(1e-12));
  // Linear in m data are reproduced by the monotone cubic.
  CHECK(rc.field.initial(2.0, 0.6) == doctest::Approx(4.2).epsilon(1e-12));

  std::istringstream ragged("t,m,phi\n0,0,1\n0,1,1\n1,0,1\n");
  CHECK_THROWS_AS(InitialData::gridded(ragged), InitialDataError);
  CHECK(error_of(doc(R"("field": {"initial": {"family": "gridded", "path": "missing.csv"}})"), dir)
            .find("cannot open") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("numbers carry 17 significant digits") {
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
  CHECK(format_number(0.0) == "0.0000000000000000e+00");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}
