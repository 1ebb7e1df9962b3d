#include "doctest.h"

#include "hemo/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <random>

using namespace hemo;

namespace {

const ValidatedModel& cfg_a() {
  static const ValidatedModel m = validate(reference_config_a());
  return m;
}

double gk(auto f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

}  // namespace

TEST_CASE("survival and density") {
  const auto& m = cfg_a();
  CHECK(survival(m, 0.5) == 1.0);
  CHECK(survival(m, 1.0) == 1.0);
  CHECK(survival(m, 1.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(survival(m, 2.0) == 0.0);
  CHECK(k_density(m, 0.5) == 0.0);
  CHECK(k_density(m, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k_density(m, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(survival(m, 2.5), KernelError);
  CHECK_THROWS_AS(k_density(m, -0.1), KernelError);
  // k = -d survival / da
  for (double a : {1.1, 1.4, 1.9}) {
    const double h = 1e-6;
    CHECK(k_density(m, a) == doctest::Approx(-(survival(m, a + h) - survival(m, a - h)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("attenuation factors on the reference instance") {
  const auto& m = cfg_a();
  CHECK(xi(m, 1.5, 0.3) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
  CHECK(bigK(m, 0.7, 0.9) == doctest::Approx(std::exp(-1.4)).epsilon(1e-14));
  CHECK(xi(m, 0.0, 0.4) == 1.0);
  CHECK(zeta(m, 1.5, 0.2) == doctest::Approx(2.0 * std::exp(-1.5)).epsilon(1e-13));
  CHECK(zeta(m, 1.5, 0.7) == 0.0);
  CHECK(zeta_hat_over_k(m, 1.3) == doctest::Approx(2.0 * std::exp(-1.3)).epsilon(1e-13));
}

TEST_CASE("xi against quadrature along the flow with affine gamma") {
  ModelConfig c = reference_config_a();
  c.rates.gamma = Coefficient::affine(0.5, 2.0);
  c.velocity = VelocityProfile::linear(0.7);
  const ValidatedModel m = validate(c);
  for (double t : {0.3, 1.0, 2.0})
    for (double x : {0.1, 0.6, 1.0}) {
      const double integral = gk([&](double s) { return 0.5 + 2.0 * x * std::exp(-0.7 * s) + 0.7; }, 0.0, t);
      CHECK(xi(m, t, x) == doctest::Approx(std::exp(-integral)).epsilon(1e-12));
    }
}

TEST_CASE("zeta_tilde and z closed forms") {
  const auto& m = cfg_a();
  CHECK(std::abs(zeta_tilde(m) - 4.0 * std::exp(-2.0)) < 1e-9);
  CHECK(std::abs(z_integral(m) - 2.0 * std::exp(-2.0)) < 1e-12);
  const ValidatedModel b = validate(reference_config_b());
  const double zb = 2.0 * std::exp(-0.2) * (100.0 - 90.0 * std::exp(0.1));
  CHECK(std::abs(z_integral(b) - zb) < 1e-12);
  CHECK(std::abs(z_integral(b) - 0.8754153691236385) < 1e-12);
  CHECK(std::abs(gk([&](double a) { return bigZ(b, a); }, 1.0, 2.0) - zb) < 1e-12);
}

TEST_CASE("zeta_tilde takes the supremum over mother maturity") {
  // gamma decreasing in m: xi is largest for mother maturity 1.
  ModelConfig c = reference_config_a();
  c.rates.gamma = Coefficient::affine(1.5, -1.0);
  const ValidatedModel m = validate(c);
  const double oracle = gk([&](double a) { return 2.0 * k_density(m, a) * std::exp(-2.5 * a + 1.0 - std::exp(-a)); }, 1.0, 2.0);
  CHECK(zeta_tilde(m) == doctest::Approx(oracle).epsilon(1e-9));
  // gamma increasing: sup at mother maturity 0.
  c.rates.gamma = Coefficient::affine(0.5, 1.0);
  const ValidatedModel m2 = validate(c);
  const double oracle2 = gk([&](double a) { return 2.0 * k_density(m2, a) * std::exp(-1.5 * a); }, 1.0, 2.0);
  CHECK(zeta_tilde(m2) == doctest::Approx(oracle2).epsilon(1e-9));
}

TEST_CASE("zeta is constant in m below g(1) and bounded by zeta_hat") {
  const auto& m = cfg_a();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(1.0, 2.0), um(0.0, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), x = um(rng);
    CHECK(zeta(m, a, x) == doctest::Approx(zeta(m, a, 0.25)).epsilon(1e-12));
    CHECK(zeta(m, a, x) <= zeta_hat(m, a) * (1 + 1e-12));
  }
}

TEST_CASE("attenuation bounds") {
  ModelConfig c = reference_config_a();
  c.rates.gamma = Coefficient::affine(0.2, 0.8);
  c.rates.delta = Coefficient::affine(0.4, 0.3);
  c.velocity = VelocityProfile::power(1.2, 1.5);
  const ValidatedModel m = validate(c);
  const DerivedConstants d = derived_constants(m);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ut(0.0, 3.0), um(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = ut(rng), x = um(rng);
    const double v = xi(m, t, x);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(bigK(m, t, x) <= std::exp(-d.I * t) * (1 + 1e-12));
  }
}

TEST_CASE("Lipschitz constant") {
  CHECK(lipschitz_L(cfg_a()) == doctest::Approx(0.5).epsilon(1e-15));
  ModelConfig c = reference_config_a();
  c.beta.a = Coefficient::affine(1.0, 1.0);
  c.beta.b = Coefficient::constant(2.0);
  CHECK(lipschitz_L(validate(c)) == doctest::Approx(1.0).epsilon(1e-15));

  // Hill exponent 8: compare with a dense scan of |d/dx x beta|.
  c = reference_config_a();
  c.beta.exponent = 8.0;
  const ValidatedModel m = validate(c);
  double sup = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double x = i * 1e-5;
    const double h = 1e-7;
    sup = std::max(sup, std::abs((m.flux(0.0, x + h) - m.flux(0.0, x - h)) / (2 * h)));
  }
  CHECK(lipschitz_L(m) >= sup * (1 - 1e-6));
  CHECK(lipschitz_L(m) == doctest::Approx(sup).epsilon(1e-5));
}

TEST_CASE("derived constants on the reference instance") {
  const DerivedConstants d = derived_constants(cfg_a());
  CHECK(d.I == 2.0);
  CHECK(d.I0 == 2.0);
  CHECK(d.nu == 1.0);
  CHECK(d.L == 0.5);
  REQUIRE(d.tau0);
  CHECK(*d.tau0 == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  REQUIRE(d.alpha);
  CHECK(*d.alpha == doctest::Approx(0.5 * (8.0 * std::exp(-2.0) + 1.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("decay rate against an independent root finder") {
  const DerivedConstants d = derived_constants(cfg_a());
  REQUIRE(d.rho);
  auto margin = [&](double r) { return d.I - r - d.L * (1.0 + 2.0 * d.zeta_tilde * std::exp(r * 2.0)); };
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto [lo, hi] = boost::math::tools::bisect(margin, 0.0, d.I, tol);
  CHECK(std::abs(*d.rho - 0.5 * (lo + hi)) < 1e-10);
  CHECK(std::abs(margin(*d.rho)) < 1e-10);
  REQUIRE(d.theta);
  CHECK(d.L * *d.theta < 1.0);
}

TEST_CASE("decay rate is absent when the local criterion fails") {
  CHECK_FALSE(decay_rate(1.0, 1.0, 0.5, 2.0));
  CHECK_FALSE(decay_rate(0.1, 0.0, 0.5, 2.0));
}
