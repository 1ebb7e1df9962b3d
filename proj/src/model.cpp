#include "hemo/model.hpp"

#include <algorithm>
#include <cmath>

namespace hemo {

namespace {

constexpr int kSampleCount = 256;

double sample(int i) { return static_cast<double>(i) / (kSampleCount - 1); }

void check_coefficient(const Coefficient& c, const std::string& field, ModelError::Kind kind, bool strict) {
  if (!std::isfinite(c.intercept) || !std::isfinite(c.slope)) {
    throw ModelError(kind, field, "non-finite coefficient");
  }
  for (int i = 0; i < kSampleCount; ++i) {
    const double v = c(sample(i));
    if (strict ? !(v > 0.0) : !(v >= 0.0)) {
      throw ModelError(kind, field, strict ? "must be strictly positive on [0,1]" : "must be nonnegative on [0,1]");
    }
  }
}

}  // namespace

const char* to_string(ModelError::Kind kind) {
  switch (kind) {
    case ModelError::Kind::InvalidVelocity: return "InvalidVelocity";
    case ModelError::Kind::InvalidDivisionMap: return "InvalidDivisionMap";
    case ModelError::Kind::InvalidRates: return "InvalidRates";
    case ModelError::Kind::InvalidKernel: return "InvalidKernel";
    case ModelError::Kind::InvalidBeta: return "InvalidBeta";
  }
  return "ModelError";
}

double VelocityProfile::operator()(double m) const {
  if (family == Family::linear) return rate * m;
  return coefficient * std::pow(m, exponent);
}

double VelocityProfile::derivative(double m) const {
  if (family == Family::linear) return rate;
  if (exponent == 1.0) return coefficient;
  return coefficient * exponent * std::pow(m, exponent - 1.0);
}

double Coefficient::min_on_unit() const { return std::min((*this)(0.0), (*this)(1.0)); }
double Coefficient::max_on_unit() const { return std::max((*this)(0.0), (*this)(1.0)); }

double ValidatedModel::beta(double m, double x) const {
  const double a = cfg_.beta.a(m);
  const double b = cfg_.beta.b(m);
  if (x < 0.0) return a / b;
  const double n = cfg_.beta.exponent;
  const double xn = n == 1.0 ? x : std::pow(x, n);
  return a / (xn + b);
}

double beta_eval(const ValidatedModel& model, double m, double x) { return model.beta(m, x); }

ValidatedModel validate(const ModelConfig& cfg) {
  using K = ModelError::Kind;

  const auto& v = cfg.velocity;
  if (v.family == VelocityProfile::Family::linear) {
    if (!(v.rate > 0.0) || !std::isfinite(v.rate)) throw ModelError(K::InvalidVelocity, "velocity.rate", "must be > 0");
  } else {
    if (!(v.coefficient > 0.0) || !std::isfinite(v.coefficient)) {
      throw ModelError(K::InvalidVelocity, "velocity.coefficient", "must be > 0");
    }
    if (!(v.exponent >= 1.0) || !std::isfinite(v.exponent)) {
      throw ModelError(K::InvalidVelocity, "velocity.exponent", "must be >= 1");
    }
  }
  if (v(0.0) != 0.0) throw ModelError(K::InvalidVelocity, "velocity", "V(0) must vanish");
  for (int i = 1; i < kSampleCount; ++i) {
    const double m = sample(i);
    if (!(v(m) > 0.0) || !std::isfinite(v.derivative(m))) {
      throw ModelError(K::InvalidVelocity, "velocity", "V must be positive with finite V' on (0,1]");
    }
  }

  const double alpha = cfg.division.ratio;
  if (!(alpha > 0.0 && alpha < 1.0)) throw ModelError(K::InvalidDivisionMap, "division.ratio", "must lie in (0,1)");

  check_coefficient(cfg.rates.delta, "rates.delta", K::InvalidRates, false);
  check_coefficient(cfg.rates.gamma, "rates.gamma", K::InvalidRates, false);

  const auto& k = cfg.kernel;
  if (!std::isfinite(k.tau_min) || !(k.tau_min >= 0.0)) throw ModelError(K::InvalidKernel, "kernel.tau_min", "must be >= 0");
  if (!std::isfinite(k.tau_max) || !(k.tau_max > k.tau_min)) {
    throw ModelError(K::InvalidKernel, "kernel.tau_max", "must exceed tau_min");
  }
  if (!(k.shape > 0.0) || !std::isfinite(k.shape)) throw ModelError(K::InvalidKernel, "kernel.shape", "must be > 0");

  check_coefficient(cfg.beta.a, "beta.a", K::InvalidBeta, true);
  check_coefficient(cfg.beta.b, "beta.b", K::InvalidBeta, true);
  if (!(cfg.beta.exponent >= 1.0) || !std::isfinite(cfg.beta.exponent)) {
    throw ModelError(K::InvalidBeta, "beta.exponent", "must be >= 1");
  }

  return ValidatedModel(cfg);
}

ModelConfig reference_config_a() {
  ModelConfig c;
  c.velocity = VelocityProfile::linear(1.0);
  c.division = DivisionMap{0.5};
  c.rates = RateProfile{Coefficient::constant(1.0), Coefficient::constant(0.0)};
  c.kernel = DivisionKernel{1.0, 2.0, 2.0};
  c.beta = Reintroduction{Coefficient::constant(0.5), Coefficient::constant(1.0), 1.0};
  return c;
}

ModelConfig reference_config_b() {
  ModelConfig c = reference_config_a();
  c.velocity = VelocityProfile::linear(0.1);
  c.rates.delta = Coefficient::constant(0.1);
  return c;
}

}  // namespace hemo
