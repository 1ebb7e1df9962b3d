#include "doctest.h"

#include "hemo/field.hpp"
#include "hemo/field_kernels.hpp"

#include <cstring>

using namespace hemo;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("serial and parallel gain are bitwise identical") {
  const ValidatedModel m = validate(reference_config_a());
  const Field f = solve_field(m, InitialData::constant(1.0).plus(InitialData::bump(0.5, 0.2, 0.7)), 6.0);
  const GainTables g = make_gain_tables(m, f.grid, 32);
  const SliceLookup lk = f.lookup();
  const double t = f.times.back();
  std::vector<double> serial(g.nodes);
  source_serial(g, m, lk, t, serial);
  for (int workers : {0, 2, 3, 4}) {
    std::vector<double> par(g.nodes);
    source_parallel(g, m, lk, t, par, workers);
    CHECK(bitwise_equal(serial, par));
  }
  for (std::size_t j = 0; j < g.nodes; j += 17) CHECK(source_node(g, m, lk, t, j) == serial[j]);
}

TEST_CASE("worker count does not change the field") {
  const ValidatedModel m = validate(reference_config_a());
  const InitialData phi = InitialData::constant(1.0);
  FieldOptions one, four;
  four.workers = 4;
  const Field a = solve_field(m, phi, 8.0, one);
  const Field b = solve_field(m, phi, 8.0, four);
  REQUIRE(a.slices.size() == b.slices.size());
  for (std::size_t k = 0; k < a.slices.size(); ++k) CHECK(bitwise_equal(a.slices[k], b.slices[k]));
}

TEST_CASE("implicit gain with tau_min = 0 is also worker independent") {
  ModelConfig c = reference_config_a();
  c.kernel.tau_min = 0.0;
  const ValidatedModel m = validate(c);
  FieldOptions one, three;
  three.workers = 3;
  const Field a = solve_field(m, InitialData::constant(0.5), 4.0, one);
  const Field b = solve_field(m, InitialData::constant(0.5), 4.0, three);
  CHECK(a.grid.dt == doctest::Approx(2.0 / 64.0));
  REQUIRE(a.slices.size() == b.slices.size());
  for (std::size_t k = 0; k < a.slices.size(); ++k) CHECK(bitwise_equal(a.slices[k], b.slices[k]));
}

TEST_CASE("repeated solves are identical") {
  const ValidatedModel m = validate(reference_config_a());
  const Field a = solve_field(m, InitialData::constant(1.0), 5.0);
  const Field b = solve_field(m, InitialData::constant(1.0), 5.0);
  for (std::size_t k = 0; k < a.slices.size(); ++k) CHECK(bitwise_equal(a.slices[k], b.slices[k]));
}
