#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hemo {

/// Raised when a model configuration violates one of its invariants.
class ModelError : public std::invalid_argument {
public:
  enum class Kind { InvalidVelocity, InvalidDivisionMap, InvalidRates, InvalidKernel, InvalidBeta };

  ModelError(Kind kind, std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), kind_(kind), field_(std::move(field)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

private:
  Kind kind_;
  std::string field_;
};

const char* to_string(ModelError::Kind kind);

/// Maturation velocity V(m). Linear: V = r m. Power: V = c m^p.
struct VelocityProfile {
  enum class Family { linear, power };

  Family family = Family::linear;
  double rate = 1.0;         // linear
  double coefficient = 1.0;  // power
  double exponent = 1.0;     // power, p >= 1

  double operator()(double m) const;
  double derivative(double m) const;

  static VelocityProfile linear(double r) { return {Family::linear, r, 1.0, 1.0}; }
  static VelocityProfile power(double c, double p) { return {Family::power, 1.0, c, p}; }
};

/// g(m) = ratio * m, with g^{-1}(m) = 1 above g(1).
struct DivisionMap {
  double ratio = 0.5;

  double operator()(double m) const { return ratio * m; }
  double g1() const { return ratio; }
  double inverse(double m) const { return m <= ratio ? m / ratio : 1.0; }
  // Left value 1/ratio at m = g(1).
  double inverse_derivative(double m) const { return m <= ratio ? 1.0 / ratio : 0.0; }
};

/// Constant or affine coefficient c(m) = intercept + slope * m.
struct Coefficient {
  enum class Family { constant, affine };

  Family family = Family::constant;
  double intercept = 0.0;
  double slope = 0.0;

  double operator()(double m) const { return family == Family::constant ? intercept : intercept + slope * m; }
  double min_on_unit() const;
  double max_on_unit() const;

  static Coefficient constant(double v) { return {Family::constant, v, 0.0}; }
  static Coefficient affine(double c0, double c1) { return {Family::affine, c0, c1}; }
};

struct RateProfile {
  Coefficient delta;  // resting-phase loss
  Coefficient gamma;  // proliferating-phase loss
};

/// Division hazard kappa(a) = c / (tau_max - a) on [tau_min, tau_max).
struct DivisionKernel {
  double tau_min = 1.0;
  double tau_max = 2.0;
  double shape = 2.0;

  double span() const { return tau_max - tau_min; }
};

/// Hill reintroduction rate beta(m, x) = a(m) / (x^n + b(m)), constant for x < 0.
struct Reintroduction {
  Coefficient a;
  Coefficient b;
  double exponent = 1.0;
};

struct ModelConfig {
  VelocityProfile velocity;
  DivisionMap division;
  RateProfile rates;
  DivisionKernel kernel;
  Reintroduction beta;
};

/// A model whose invariants have been checked. Immutable after construction.
class ValidatedModel {
public:
  const ModelConfig& config() const noexcept { return cfg_; }

  const VelocityProfile& velocity() const noexcept { return cfg_.velocity; }
  const DivisionMap& division() const noexcept { return cfg_.division; }
  const RateProfile& rates() const noexcept { return cfg_.rates; }
  const DivisionKernel& kernel() const noexcept { return cfg_.kernel; }
  const Reintroduction& reintroduction() const noexcept { return cfg_.beta; }

  double tau_min() const noexcept { return cfg_.kernel.tau_min; }
  double tau_max() const noexcept { return cfg_.kernel.tau_max; }

  /// beta(m, x) with the constant extension for negative densities.
  double beta(double m, double x) const;
  /// x * beta(m, x), the reintroduction flux.
  double flux(double m, double x) const { return x * beta(m, x); }

private:
  explicit ValidatedModel(ModelConfig cfg) : cfg_(std::move(cfg)) {}
  friend ValidatedModel validate(const ModelConfig&);

  ModelConfig cfg_;
};

/// Checks every coefficient invariant; throws ModelError naming the offending field.
ValidatedModel validate(const ModelConfig& config);

double beta_eval(const ValidatedModel& model, double m, double x);

/// The two reference instances used throughout the test suites.
ModelConfig reference_config_a();
ModelConfig reference_config_b();

}  // namespace hemo
