#include "hemo/field.hpp"
#include "hemo/field_kernels.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace hemo;

namespace {

struct Fixture {
  ValidatedModel model = validate(reference_config_a());
  Field field = solve_field(model, InitialData::constant(1.0), 6.0);
  GainTables tables = make_gain_tables(model, field.grid, 32);
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_GainSerial(benchmark::State& state) {
  auto& f = fixture();
  const SliceLookup lk = f.field.lookup();
  std::vector<double> out(f.tables.nodes);
  for (auto _ : state) {
    source_serial(f.tables, f.model, lk, f.field.final_time(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_GainSerial);

void BM_GainParallel(benchmark::State& state) {
  auto& f = fixture();
  const SliceLookup lk = f.field.lookup();
  std::vector<double> out(f.tables.nodes);
  for (auto _ : state) {
    source_parallel(f.tables, f.model, lk, f.field.final_time(), out, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_GainParallel)->Arg(1)->Arg(2)->Arg(4);

void BM_SolveField(benchmark::State& state) {
  auto& f = fixture();
  FieldOptions o;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_field(f.model, InitialData::constant(1.0), 10.0, o));
}
BENCHMARK(BM_SolveField)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
