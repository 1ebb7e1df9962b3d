#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Initial data phi(t, m) on [0, tau_max] x [0, 1], as a sum of closed-form terms
// or a gridded table.

namespace hemo {

class InitialDataError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct PhiTerm {
  enum class Family { constant, product, bump, gridded };
  Family family = Family::constant;
  double cap = 1.0;  // evaluated at min(m, cap); set by truncation

  double value = 0.0;  // constant

  // product: (c0 + c1 t)(d0 + d1 m)
  double c0 = 1.0, c1 = 0.0, d0 = 1.0, d1 = 0.0;

  // bump: amplitude * sin^2(pi (m - lo)/(hi - lo)) on [lo, hi], zero elsewhere
  double amplitude = 0.0, lo = 0.0, hi = 1.0;

  // gridded: values[i * maturities.size() + j] at (times[i], maturities[j])
  std::vector<double> times;
  std::vector<double> maturities;
  std::vector<double> values;

  double operator()(double t, double m) const;
  double dt(double t, double m) const;
};

class InitialData {
public:
  InitialData() = default;
  explicit InitialData(std::vector<PhiTerm> terms) : terms_(std::move(terms)) {}

  static InitialData constant(double v);
  static InitialData product(double c0, double c1, double d0, double d1);
  static InitialData bump(double amplitude, double lo, double hi);
  /// Reads a `t,m,phi` table. Rows may come in any order but must fill a tensor grid.
  static InitialData gridded(std::istream& in);

  double operator()(double t, double m) const;
  /// Time derivative, used for the boundary history.
  double dt(double t, double m) const;

  InitialData plus(const InitialData& other) const;
  /// phi_b(t, m) = phi(t, min(m, b)).
  InitialData truncated(double b) const;

  /// sup |phi| over [0, tau_max] x [0, 1], sampled densely.
  double sup_norm(double tau_max) const;

  const std::vector<PhiTerm>& terms() const noexcept { return terms_; }

private:
  std::vector<PhiTerm> terms_;
};

InitialData truncate_phi_b(const InitialData& phi, double b);

}  // namespace hemo
