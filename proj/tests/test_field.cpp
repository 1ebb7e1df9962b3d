#include "doctest.h"

#include "hemo/field.hpp"
#include "hemo/flow.hpp"
#include "hemo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace hemo;

namespace {

const ValidatedModel& cfg_a() {
  static const ValidatedModel m = validate(reference_config_a());
  return m;
}

// A field whose every slice, and whose boundary trace, equal x0.
Field constant_field(const ValidatedModel& m, double x0, std::size_t extra) {
  Field f;
  f.options.dt = default_field_step(m);
  f.grid = make_grid(m, f.options.dt, f.options.y_min);
  const std::size_t K = static_cast<std::size_t>(std::lround(m.tau_max() / f.grid.dt));
  f.first_step = K;
  for (std::size_t k = 0; k <= K + extra; ++k) {
    f.times.push_back(k * f.grid.dt);
    f.slices.emplace_back(f.grid.size(), x0);
    f.floor_values.push_back(x0);
  }
  f.trace = integrate(m, ScalarHistory::constant(m.tau_max(), x0), m.tau_max() + 1.0, 0.03125);
  return f;
}

// Simpson sum of e^{-2u} over [0, 2h], the s-rule the operators use on two steps.
double simpson_decay(double h) { return h / 3.0 * (1.0 + 4.0 * std::exp(-2.0 * h) + std::exp(-4.0 * h)); }

}  // namespace

TEST_CASE("grid is aligned with the characteristics") {
  const auto& m = cfg_a();
  const double dt = default_field_step(m);
  CHECK(dt == 0.0625);
  const MaturityGrid g = make_grid(m, dt, -12.0);
  CHECK(g.J == 192);
  CHECK(g.size() == 193u);
  CHECK(g.y.back() == 0.0);
  CHECK(g.m.back() == 1.0);
  CHECK(g.y_floor() <= -12.0);
  for (std::size_t j = 1; j < g.size(); ++j) {
    CHECK(g.y[j] - g.y[j - 1] == doctest::Approx(dt).epsilon(1e-12));
    // Pulling node j back by one step lands on node j - 1.
    CHECK(pi(m, -dt, g.m[j]) == doctest::Approx(g.m[j - 1]).epsilon(1e-12));
  }
}

TEST_CASE("zero data give the zero field bit-exact") {
  const Field f = solve_field(cfg_a(), InitialData::constant(0.0), 10.0);
  for (const auto& s : f.slices)
    for (double v : s) CHECK(v == 0.0);
  for (double v : f.floor_values) CHECK(v == 0.0);
}

TEST_CASE("m-homogeneous data follow the boundary equation below g(1)") {
  const auto& m = cfg_a();
  const Field f = solve_field(m, InitialData::constant(1.0), 12.0);
  DdeOptions o;
  o.gain = BoundaryGain::trace;
  const DdeSolution x = integrate(m, ScalarHistory::constant(2.0, 1.0), 12.0, 0.0625 / 4.0, o);
  double worst = 0.0;
  for (std::size_t k = f.first_step; k < f.slices.size(); ++k)
    for (std::size_t j = 0; j < f.grid.size(); ++j)
      if (f.grid.m[j] < m.division().g1()) worst = std::max(worst, std::abs(f.slices[k][j] - x.value_at(f.times[k])));
  CHECK(worst < 5e-4);
}

TEST_CASE("nonnegative data give a nonnegative field") {
  const InitialData phi = InitialData::product(1.0, 0.2, 0.1, 0.9).plus(InitialData::bump(2.0, 0.3, 0.8));
  const Field f = solve_field(cfg_a(), phi, 10.0);
  for (const auto& s : f.slices)
    for (double v : s) CHECK(v >= -1e-9);
}

TEST_CASE("gain operator on constant data collapses to a scalar integral") {
  const auto& m = cfg_a();
  const double x0 = 0.7;
  const Field f = constant_field(m, x0, 4);
  const std::size_t K = f.first_step;
  const std::size_t j = f.grid.size() - 17;  // y = -1, below ln g(1)
  const double lam = m.flux(0.0, x0);
  const double zt = 4.0 * std::exp(-2.0);
  const double width = 2.0 * f.grid.dt;
  const double exact = 2.0 * lam * zt * (1.0 - std::exp(-2.0 * width)) / 2.0;
  const double G = operator_G(m, f, K + 2, j, K);
  CHECK(G == doctest::Approx(2.0 * lam * zt * simpson_decay(f.grid.dt)).epsilon(1e-12));
  CHECK(G == doctest::Approx(exact).epsilon(2e-6));  // Simpson error h^4 16/180
  CHECK(std::abs(operator_G(m, f, K + 1, j, K)) <= 2.0 * 0.5 * zt * f.grid.dt * x0 * (1 + f.grid.dt));
}

TEST_CASE("loss operator on constant data") {
  const auto& m = cfg_a();
  const double x0 = 0.7;
  const Field f = constant_field(m, x0, 4);
  const std::size_t K = f.first_step;
  const double width = 2.0 * f.grid.dt;
  const double exact = m.flux(0.0, x0) * (1.0 - std::exp(-2.0 * width)) / 2.0;
  for (std::size_t j : {std::size_t{20}, std::size_t{100}, f.grid.size() - 1}) {
    const double J = operator_J(m, f, K + 2, j, K);
    CHECK(J == doctest::Approx(m.flux(0.0, x0) * simpson_decay(f.grid.dt)).epsilon(1e-12));
    CHECK(J == doctest::Approx(exact).epsilon(2e-6));
    CHECK(std::abs(operator_J(m, f, K + 1, j, K)) <= 0.5 * x0 * f.grid.dt);
  }
}

TEST_CASE("operators vanish on the zero field") {
  const auto& m = cfg_a();
  const Field f = constant_field(m, 0.0, 4);
  CHECK(operator_G(m, f, f.first_step + 4, 50, f.first_step) == 0.0);
  CHECK(operator_J(m, f, f.first_step + 4, 50, f.first_step) == 0.0);
}

TEST_CASE("operators reject windows outside the solved range") {
  const auto& m = cfg_a();
  const Field f = constant_field(m, 1.0, 2);
  CHECK_THROWS_AS(operator_J(m, f, f.first_step + 1, 10, 0), SolverError);
  CHECK_THROWS_AS(operator_G(m, f, f.slices.size(), 10, f.first_step), SolverError);
}

TEST_CASE("solved field satisfies the mild formulation") {
  const auto& m = cfg_a();
  const Field f = solve_field(m, InitialData::constant(1.0), 6.0);
  const std::size_t n0 = f.first_step + 2, n = n0 + 16;
  for (std::size_t j : {std::size_t{40}, std::size_t{150}, f.grid.size() - 1}) {
    const double transported = f.slices[n0][j - (n - n0)] * bigK(m, (n - n0) * f.grid.dt, f.grid.m[j]);
    const double rhs = transported + operator_G(m, f, n, j, n0) - operator_J(m, f, n, j, n0);
    CHECK(std::abs(f.slices[n][j] - rhs) < 1e-6);
  }
}

TEST_CASE("Picard stays contractive and converges") {
  const auto& m = cfg_a();
  const Field f = solve_field(m, InitialData::constant(1.0), 10.0);
  const DerivedConstants c = derived_constants(m);
  CHECK(f.picard.ratio_samples > 0u);
  CHECK(f.picard.max_ratio <= *c.alpha + 0.1);
  CHECK(f.picard.max_iterations < f.options.picard_max);
  const PicardSweep sweep = picard_sweep(m, InitialData::constant(1.0), 6.0, 6);
  CHECK(sweep.ratios.size() >= 3u);
  CHECK(sweep.max_ratio <= *c.alpha + 0.1);
}

TEST_CASE("step checks") {
  const auto& m = cfg_a();
  FieldOptions o;
  o.dt = 0.3;
  try {
    solve_field(m, InitialData::constant(1.0), 5.0, o);
    FAIL("expected HistoryGap");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::HistoryGap);
  }
  o.dt = 2.0;
  try {
    solve_field(m, InitialData::constant(1.0), 5.0, o);
    FAIL("expected StepTooLarge");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::StepTooLarge);
    CHECK(std::string(e.what()).find("reduce dt") != std::string::npos);
  }
}

TEST_CASE("proliferating phase without resting cells decays") {
  const auto& m = cfg_a();
  const Field N = solve_field(m, InitialData::constant(0.0), 8.0);
  const Field P = reconstruct_P(m, N, InitialData::constant(0.3));
  for (std::size_t k = 0; k < P.slices.size(); ++k) {
    const double want = 0.3 * std::exp(-(P.times[k] - 2.0));
    for (double v : P.slices[k]) CHECK(v == doctest::Approx(want).epsilon(1e-12));
    CHECK(P.floor_values[k] == doctest::Approx(want).epsilon(1e-12));
  }
  const Field Z = reconstruct_P(m, N, InitialData::constant(0.0));
  for (const auto& s : Z.slices)
    for (double v : s) CHECK(v == 0.0);
}

TEST_CASE("proliferating phase stays bounded for small N") {
  const auto& m = cfg_a();
  const double eps = 0.01;
  const Field N = solve_field(m, InitialData::constant(eps), 12.0);
  const Field P = reconstruct_P(m, N, InitialData::constant(0.0));
  // |S| <= lambda(N) + efflux <= 2 L eps, attenuated at rate nu = 1.
  for (const auto& s : P.slices)
    for (double v : s) CHECK(std::abs(v) <= 2.0 * 0.5 * eps / 1.0);
}

TEST_CASE("extinction schedule on the reference instance") {
  const auto& m = cfg_a();
  const ExtinctionSchedule s = extinction_schedule(m, 0.1);
  CHECK(s.M == 5u);
  REQUIRE(s.b.size() == 7u);
  const double expect_b[] = {0.1, 0.1359, 0.1847, 0.2511, 0.3413, 0.4639, 0.5};
  double bn = 0.1;
  for (std::size_t i = 0; i < s.b.size(); ++i) {
    CHECK(s.b[i] == doctest::Approx(expect_b[i]).epsilon(2e-4));
    CHECK(s.b[i] == doctest::Approx(bn).epsilon(1e-13));
    bn = std::min(0.5, 0.5 * bn * std::exp(1.0));
  }
  CHECK(s.t[6] == doctest::Approx(12.0 + std::log(5.0)).epsilon(1e-13));
  CHECK(s.t_bar == doctest::Approx(14.0 + std::log(5.0) + std::log(2.0)).epsilon(1e-13));
  CHECK(s.t_bar == doctest::Approx(16.3026).epsilon(1e-5));

  const ExtinctionSchedule g = extinction_schedule(m, 0.5);
  CHECK(g.M == 0u);
  CHECK(g.t[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g.t_bar == doctest::Approx(4.0 + std::log(2.0)).epsilon(1e-14));

  ModelConfig c = reference_config_a();
  c.kernel.tau_min = 0.5;
  try {
    extinction_schedule(validate(c), 0.1);
    FAIL("expected NotApplicable");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::NotApplicable);
  }
}

TEST_CASE("Lambda_inv_alpha inverts Delta(tau_min, .)") {
  const auto& m = cfg_a();
  for (int i = 1; i < 100; ++i) {
    const double x = 0.5 * i / 100.0;
    const double u = delta(m, m.tau_min(), x);
    CHECK(Lambda_inv_alpha(m, u) == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK(Lambda_inv_alpha(m, 0.3) == doctest::Approx(0.15 * std::exp(1.0)).epsilon(1e-14));
  CHECK(Lambda_inv_alpha(m, 0.4) == 0.5);  // above pi_{-tau_min}(1) = 1/e
}

TEST_CASE("truncation of initial data") {
  const InitialData phi = InitialData::product(1.0, 0.0, 0.0, 1.0);  // phi = m
  const InitialData pb = truncate_phi_b(phi, 0.3);
  for (double x : {0.0, 0.1, 0.3, 0.45, 0.9, 1.0}) CHECK(pb(1.0, x) == doctest::Approx(std::min(x, 0.3)).epsilon(1e-15));
  const InitialData full = truncate_phi_b(phi, 1.0);
  for (double x : {0.0, 0.4, 1.0}) CHECK(full(0.5, x) == phi(0.5, x));
  const InitialData c = truncate_phi_b(InitialData::constant(2.5), 0.2);
  for (double x : {0.0, 0.4, 1.0}) CHECK(c(0.5, x) == 2.5);
}

TEST_CASE("identical data give identical fields") {
  const auto& m = cfg_a();
  const AgreementReport r =
      experiment_agreement(m, InitialData::constant(1.0), InitialData::constant(1.0), 0.1, 17.0);
  for (double d : r.sup_diff) CHECK(d == 0.0);
  CHECK(r.passed);
}

TEST_CASE("agreement requires equal data below b") {
  const auto& m = cfg_a();
  CHECK_THROWS_AS(
      experiment_agreement(m, InitialData::constant(1.0), InitialData::constant(1.0).plus(InitialData::bump(1.0, 0.0, 0.2)),
                           0.1, 17.0),
      SolverError);
}

TEST_CASE("lowering the floor barely moves the field") {
  const auto& m = cfg_a();
  const FloorSensitivity s = floor_sensitivity(m, InitialData::constant(1.0), 8.0);
  CHECK(s.y_min_shifted == doctest::Approx(s.y_min - 2.0).epsilon(1e-12));
  CHECK(s.max_difference < 1e-4);
}
