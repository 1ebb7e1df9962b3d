#include "doctest.h"

#include "hemo/dde.hpp"
#include "hemo/kernels.hpp"
#include "hemo/stability.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hemo;

namespace {

const ValidatedModel& cfg_a() {
  static const ValidatedModel m = validate(reference_config_a());
  return m;
}

const ValidatedModel& cfg_b() {
  static const ValidatedModel m = validate(reference_config_b());
  return m;
}

double gk(auto f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

// Forward Euler on a fine grid; the delay integral is a trapezoid sum over ages on
// multiples of the step, so every delayed value is a stored sample.
std::vector<double> euler_oracle(const ValidatedModel& m, double (*psi)(double), double T, double dt) {
  const double tau = m.tau_max();
  const long nh = std::lround(tau / dt);
  const long steps = std::lround((T - tau) / dt);
  std::vector<double> x(nh + steps + 1);
  for (long i = 0; i <= nh; ++i) x[i] = psi(i * dt);
  const long stride = 100;
  const double da = stride * dt;
  const long na = std::lround((m.tau_max() - m.tau_min()) / da);
  const long a0 = std::lround(m.tau_min() / dt);
  const double I0 = 2.0;
  for (long n = nh; n < nh + steps; ++n) {
    double s = 0.0;
    for (long q = 0; q <= na; ++q) {
      const double a = m.tau_min() + q * da;
      const double w = (q == 0 || q == na) ? 0.5 : 1.0;
      s += w * bigZ(m, a) * m.flux(0.0, x[n - a0 - q * stride]);
    }
    s *= da;
    x[n + 1] = x[n] + dt * (-(I0 + m.beta(0.0, x[n])) * x[n] + 2.0 * s);
  }
  return x;
}

double one(double) { return 1.0; }

}  // namespace

TEST_CASE("zero history gives the zero solution exactly") {
  const DdeSolution s = integrate(cfg_a(), ScalarHistory::constant(2.0, 0.0), 30.0, 0.03125);
  for (double v : s.values) CHECK(v == 0.0);
}

TEST_CASE("reference instance A decays") {
  const DdeSolution s = integrate(cfg_a(), ScalarHistory::constant(2.0, 1.0), 60.0, 0.03125);
  CHECK(s.final_time() == doctest::Approx(60.0));
  CHECK(std::abs(s.final_value()) < 1e-4);
  CHECK(*std::min_element(s.values.begin(), s.values.end()) >= 0.0);
}

TEST_CASE("RK4 trajectory agrees with a fine Euler oracle") {
  const double dt = 1e-4;
  const std::vector<double> ref = euler_oracle(cfg_a(), one, 20.0, dt);
  const DdeSolution s = integrate(cfg_a(), ScalarHistory::constant(2.0, 1.0), 20.0, 0.03125);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const long k = std::lround(s.times[i] / dt);
    worst = std::max(worst, std::abs(s.values[i] - ref[k]));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("nonnegative histories stay nonnegative") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (const ValidatedModel* m : {&cfg_a(), &cfg_b()}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(65);
      for (auto& x : v) x = u(rng) * (u(rng) > 1.0 ? 1.0 : 0.0);
      const DdeSolution s = integrate(*m, ScalarHistory::from_samples(2.0, v), 20.0, 0.03125);
      CHECK(*std::min_element(s.values.begin(), s.values.end()) >= -1e-12);
    }
  }
}

TEST_CASE("constant equilibrium of instance B is preserved") {
  const auto xs = dde_equilibrium(cfg_b());
  REQUIRE(xs);
  const DdeSolution s = integrate(cfg_b(), ScalarHistory::constant(2.0, *xs), 50.0, 0.03125);
  for (double v : s.values) CHECK(std::abs(v - *xs) < 1e-9);
}

TEST_CASE("Lambda antiderivative") {
  CHECK(lambda_antideriv(cfg_a(), 1.0) == doctest::Approx(0.5 * (1.0 - std::log(2.0))).epsilon(1e-14));
  CHECK(lambda_antideriv(cfg_a(), 0.0) == 0.0);
  CHECK(lambda_antideriv(cfg_a(), -2.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double n : {1.0, 2.0, 3.0, 4.5}) {
    ModelConfig c = reference_config_a();
    c.beta.exponent = n;
    const ValidatedModel m = validate(c);
    for (double x : {0.1, 1.0, 3.7}) {
      const double oracle = gk([&](double u) { return m.flux(0.0, u); }, 0.0, x);
      CHECK(lambda_antideriv(m, x) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("Lyapunov functional values") {
  const auto& m = cfg_a();
  CHECK(lyapunov_H(m, ScalarHistory::constant(2.0, 0.0)) == 0.0);
  const double memory = 0.0625 * gk([](double a) { return a * 2.0 * (2.0 - a) * std::exp(-a); }, 1.0, 2.0);
  CHECK(lyapunov_H(m, ScalarHistory::constant(2.0, 1.0)) ==
        doctest::Approx(0.5 * (1.0 - std::log(2.0)) + memory).epsilon(1e-10));
  // Small windows: H ~ beta0(0) eps^2 / 2.
  const double eps = 1e-4;
  const double H = lyapunov_H(m, ScalarHistory::constant(2.0, eps));
  CHECK(H == doctest::Approx(0.25 * eps * eps).epsilon(1e-3));
}

TEST_CASE("H is nonincreasing when the boundary criterion holds") {
  const DdeSolution s = integrate(cfg_a(), ScalarHistory::constant(2.0, 1.0), 40.0, 0.03125);
  const MonotonicityReport r = check_H_monotone(cfg_a(), s);
  CHECK(r.criterion_holds);
  CHECK(r.asserted);
  CHECK(r.passed);

  const DdeSolution sb = integrate(cfg_b(), ScalarHistory::constant(2.0, 1.0), 20.0, 0.03125);
  const MonotonicityReport rb = check_H_monotone(cfg_b(), sb);
  CHECK_FALSE(rb.criterion_holds);
  CHECK_FALSE(rb.asserted);
  CHECK(rb.passed);
}

TEST_CASE("fit_decay_rate") {
  std::vector<double> t, v;
  for (int i = 0; i < 100; ++i) {
    t.push_back(0.1 * i);
    v.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  CHECK(fit_decay_rate(t, v) == doctest::Approx(0.7).epsilon(1e-12));
  std::vector<double> short_t(t.begin(), t.begin() + 15), short_v(v.begin(), v.begin() + 15);
  CHECK_THROWS_AS(fit_decay_rate(short_t, short_v), SolverError);
  v[90] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, v), SolverError);
}

TEST_CASE("fourth-order convergence") {
  auto f = [](double t) { return 1.0 + 0.5 * std::sin(t); };
  auto df = [](double t) { return 0.5 * std::cos(t); };
  auto run = [&](double dt) {
    return integrate(cfg_a(), ScalarHistory::from_function(2.0, 256, f, df), 10.0, dt).value_at(10.0);
  };
  const double x1 = run(0.125), x2 = run(0.0625), x3 = run(0.03125);
  const double ratio = std::abs(x1 - x2) / std::abs(x2 - x3);
  CHECK(ratio >= 11.0);
  CHECK(ratio <= 21.0);
}

TEST_CASE("step and horizon checks") {
  const auto psi = ScalarHistory::constant(2.0, 1.0);
  try {
    integrate(cfg_a(), psi, 10.0, 0.5);
    FAIL("expected StepTooLarge");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::StepTooLarge);
  }
  CHECK_THROWS_AS(integrate(cfg_a(), psi, 1.5, 0.03125), SolverError);
  try {
    integrate(cfg_a(), ScalarHistory::constant(1.5, 1.0), 10.0, 0.03125);
    FAIL("expected HistoryGap");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::HistoryGap);
  }
}

TEST_CASE("history interpolation") {
  auto f = [](double t) { return t * t * t; };
  auto df = [](double t) { return 3 * t * t; };
  const auto h = ScalarHistory::from_function(2.0, 16, f, df);
  for (double t : {0.0, 0.33, 1.0, 1.77, 2.0}) CHECK(h.value(t) == doctest::Approx(f(t)).epsilon(1e-13));
  const auto g = ScalarHistory::from_samples(2.0, {0.0, 1.0, 2.0, 3.0, 4.0});
  CHECK(g.value(0.75) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("fit_decay_rate on a polynomially modulated exponential") {
  std::vector<double> t, v, z;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(20.0 + 0.1 * i);
    v.push_back(t.back() * std::exp(-0.3 * t.back()));
    z.push_back(0.0);
  }
  const double r = fit_decay_rate(t, v);
  CHECK(r >= 0.25);
  CHECK(r <= 0.3);
  CHECK_THROWS_AS(fit_decay_rate(t, z), SolverError);
}
