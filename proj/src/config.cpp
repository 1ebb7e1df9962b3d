#include "hemo/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace hemo {

using nlohmann::json;

const std::vector<std::string>& known_criteria() {
  static const std::vector<std::string> names{"local", "dde", "structural", "global_lipschitz", "global"};
  return names;
}

BoundaryGain parse_gain(const std::string& name) {
  if (name == "unscaled") return BoundaryGain::unscaled;
  if (name == "trace") return BoundaryGain::trace;
  throw ConfigError("boundary_gain must be \"unscaled\" or \"trace\", got \"" + name + "\"");
}

const char* to_string(BoundaryGain gain) { return gain == BoundaryGain::unscaled ? "unscaled" : "trace"; }

namespace {

// A JSON object together with its dotted path and the keys it may contain.
class Node {
public:
  Node(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j_.items()) {
      if (!ok.count(key)) throw ConfigError(sub(key) + ": unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!has(key)) fail(std::string("missing required key \"") + key + "\"");
    return j_.at(key);
  }
  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(sub(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(sub(key) + ": must be finite");
    return d;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(sub(key) + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(sub(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(sub(key) + ": expected a string");
    return v.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + what);
  }

private:
  const json& j_;
  std::string path_;
};

std::string family_of(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError(path + ": expected an object with a string \"family\"");
  }
  return j.at("family").get<std::string>();
}

Coefficient parse_coefficient(const json& j, const std::string& path) {
  if (j.is_number()) return Coefficient::constant(j.get<double>());
  const std::string fam = family_of(j, path);
  if (fam == "constant") {
    Node n(j, path, {"family", "value"});
    return Coefficient::constant(n.number("value"));
  }
  if (fam == "affine") {
    Node n(j, path, {"family", "intercept", "slope"});
    return Coefficient::affine(n.number("intercept"), n.number("slope"));
  }
  throw ConfigError(path + ".family: unknown coefficient family \"" + fam + "\" (constant, affine)");
}

ModelConfig parse_model(const json& j, const std::string& path) {
  Node n(j, path, {"velocity", "division", "rates", "kernel", "beta"});
  ModelConfig c;

  const std::string vp = n.sub("velocity");
  const std::string vf = family_of(n.raw("velocity"), vp);
  if (vf == "linear") {
    Node v(n.raw("velocity"), vp, {"family", "rate"});
    c.velocity = VelocityProfile::linear(v.number("rate"));
  } else if (vf == "power") {
    Node v(n.raw("velocity"), vp, {"family", "coefficient", "exponent"});
    c.velocity = VelocityProfile::power(v.number("coefficient"), v.number("exponent"));
  } else {
    throw ConfigError(vp + ".family: unknown velocity family \"" + vf + "\" (linear, power)");
  }

  const std::string dp = n.sub("division");
  const std::string df = family_of(n.raw("division"), dp);
  if (df != "linear") throw ConfigError(dp + ".family: unknown division family \"" + df + "\" (linear)");
  Node d(n.raw("division"), dp, {"family", "ratio"});
  c.division = DivisionMap{d.number("ratio")};

  Node r(n.raw("rates"), n.sub("rates"), {"delta", "gamma"});
  c.rates.delta = parse_coefficient(r.raw("delta"), r.sub("delta"));
  c.rates.gamma = parse_coefficient(r.raw("gamma"), r.sub("gamma"));

  Node k(n.raw("kernel"), n.sub("kernel"), {"tau_min", "tau_max", "shape"});
  c.kernel = DivisionKernel{k.number("tau_min"), k.number("tau_max"), k.number("shape")};

  Node b(n.raw("beta"), n.sub("beta"), {"a", "b", "exponent"});
  c.beta.a = parse_coefficient(b.raw("a"), b.sub("a"));
  c.beta.b = parse_coefficient(b.raw("b"), b.sub("b"));
  c.beta.exponent = b.number("exponent", 1.0);
  return c;
}

InitialData parse_phi(const json& j, const std::string& path, const std::filesystem::path& base) {
  if (j.is_number()) return InitialData::constant(j.get<double>());
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(path + ": empty list of initial-data terms");
    InitialData sum = parse_phi(j.at(0), path + "[0]", base);
    for (std::size_t i = 1; i < j.size(); ++i) sum = sum.plus(parse_phi(j.at(i), path + "[" + std::to_string(i) + "]", base));
    return sum;
  }
  const std::string fam = family_of(j, path);
  try {
    if (fam == "constant") {
      Node n(j, path, {"family", "value"});
      return InitialData::constant(n.number("value"));
    }
    if (fam == "product") {
      Node n(j, path, {"family", "c0", "c1", "d0", "d1"});
      return InitialData::product(n.number("c0", 1.0), n.number("c1", 0.0), n.number("d0", 1.0), n.number("d1", 0.0));
    }
    if (fam == "bump") {
      Node n(j, path, {"family", "amplitude", "lo", "hi", "base"});
      InitialData b = InitialData::bump(n.number("amplitude"), n.number("lo"), n.number("hi"));
      if (n.has("base")) b = InitialData::constant(n.number("base")).plus(b);
      return b;
    }
    if (fam == "gridded") {
      Node n(j, path, {"family", "path"});
      std::filesystem::path p = n.string("path");
      if (p.is_relative()) p = base / p;
      std::ifstream in(p);
      if (!in) throw ConfigError(n.sub("path") + ": cannot open " + p.string());
      return InitialData::gridded(in);
    }
    if (fam == "truncated") {
      Node n(j, path, {"family", "b", "of"});
      return parse_phi(n.raw("of"), n.sub("of"), base).truncated(n.number("b"));
    }
  } catch (const InitialDataError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".family: unknown initial-data family \"" + fam +
                    "\" (constant, product, bump, gridded, truncated)");
}

void parse_grid(const json& j, FieldOptions& o) {
  Node n(j, "grid", {"y_min", "dt", "quad_order", "picard_tol", "picard_max", "workers"});
  o.y_min = n.number("y_min", o.y_min);
  o.dt = n.number("dt", o.dt);
  o.quad_order = n.integer("quad_order", o.quad_order);
  o.picard_tol = n.number("picard_tol", o.picard_tol);
  o.picard_max = n.integer("picard_max", o.picard_max);
  o.workers = n.integer("workers", o.workers);
  if (!(o.y_min < 0.0)) throw ConfigError("grid.y_min: must be negative");
  if (o.dt < 0.0) throw ConfigError("grid.dt: must be positive (or 0 for the default)");
  if (o.quad_order < 2 || o.quad_order > 256) throw ConfigError("grid.quad_order: must lie in [2, 256]");
  if (!(o.picard_tol > 0.0)) throw ConfigError("grid.picard_tol: must be positive");
  if (o.picard_max < 1) throw ConfigError("grid.picard_max: must be at least 1");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "malformed JSON at byte " << e.byte << ": " << e.what();
    throw ConfigError(os.str());
  }

  Node root(doc, "", {"model", "grid", "dde", "field", "experiments", "report"});
  RunConfig rc;
  rc.model = parse_model(root.raw("model"), "model");
  if (root.has("grid")) parse_grid(root.raw("grid"), rc.grid);

  if (root.has("dde")) {
    Node n(root.raw("dde"), "dde", {"horizon", "dt", "history", "boundary_gain"});
    rc.dde.horizon = n.number("horizon", rc.dde.horizon);
    rc.dde.dt = n.number("dt", rc.dde.dt);
    if (n.has("history")) rc.dde.history = parse_phi(n.raw("history"), "dde.history", base_dir);
    if (n.has("boundary_gain")) {
      try {
        rc.dde.gain = parse_gain(n.string("boundary_gain"));
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("dde.") + e.what());
      }
    }
  }

  if (root.has("field")) {
    Node n(root.raw("field"), "field", {"horizon", "initial", "P0", "floor_sensitivity"});
    rc.field.horizon = n.number("horizon", rc.field.horizon);
    if (n.has("initial")) rc.field.initial = parse_phi(n.raw("initial"), "field.initial", base_dir);
    if (n.has("P0")) rc.field.P0 = parse_phi(n.raw("P0"), "field.P0", base_dir);
    rc.field.floor_sensitivity = n.boolean("floor_sensitivity", rc.field.floor_sensitivity);
  }

  if (root.has("experiments")) {
    Node ex(root.raw("experiments"), "experiments", {"decay", "extinction", "agreement", "equilibrium"});
    if (ex.has("decay")) {
      Node n(ex.raw("decay"), "experiments.decay", {"horizon", "initial", "sweep_window", "sweep_iterations"});
      DecaySettings s;
      s.horizon = n.number("horizon", s.horizon);
      if (n.has("initial")) s.phi = parse_phi(n.raw("initial"), n.sub("initial"), base_dir);
      s.sweep_window = n.number("sweep_window", s.sweep_window);
      s.sweep_iterations = n.integer("sweep_iterations", s.sweep_iterations);
      rc.decay = s;
    }
    if (ex.has("extinction")) {
      Node n(ex.raw("extinction"), "experiments.extinction", {"b", "initial", "offset"});
      ExtinctionSettings s;
      s.b = n.number("b", s.b);
      s.phi = n.has("initial") ? parse_phi(n.raw("initial"), n.sub("initial"), base_dir)
                               : InitialData::bump(1.0, s.b, 1.0);
      s.offset = n.number("offset", s.offset);
      rc.extinction = s;
    }
    if (ex.has("agreement")) {
      Node n(ex.raw("agreement"), "experiments.agreement", {"b", "initial_1", "initial_2", "horizon"});
      AgreementSettings s;
      s.b = n.number("b", s.b);
      if (n.has("initial_1")) s.phi1 = parse_phi(n.raw("initial_1"), n.sub("initial_1"), base_dir);
      s.phi2 = n.has("initial_2") ? parse_phi(n.raw("initial_2"), n.sub("initial_2"), base_dir)
                                  : s.phi1.plus(InitialData::bump(1.0, s.b, 1.0));
      s.horizon = n.number("horizon", s.horizon);
      rc.agreement = s;
    }
    if (ex.has("equilibrium")) {
      Node n(ex.raw("equilibrium"), "experiments.equilibrium", {"horizon", "dt", "tolerance", "boundary_gain"});
      EquilibriumSettings s;
      s.horizon = n.number("horizon", s.horizon);
      s.dt = n.number("dt", s.dt);
      s.tolerance = n.number("tolerance", s.tolerance);
      if (n.has("boundary_gain")) s.gain = parse_gain(n.string("boundary_gain"));
      rc.equilibrium = s;
    }
  }

  if (root.has("report")) {
    Node n(root.raw("report"), "report", {"criteria"});
    if (n.has("criteria")) {
      const json& list = n.raw("criteria");
      if (!list.is_array()) throw ConfigError("report.criteria: expected a list of names");
      rc.criteria.clear();
      for (const auto& item : list) {
        if (!item.is_string()) throw ConfigError("report.criteria: expected strings");
        const std::string name = item.get<std::string>();
        const auto& known = known_criteria();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw ConfigError("report.criteria: unknown criterion \"" + name + "\"");
        }
        rc.criteria.push_back(name);
      }
    }
  }
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace hemo
