#include <benchmark/benchmark.h>

#include "hypolab/bogovskii.hpp"
#include "hypolab/characteristics.hpp"
#include "hypolab/initial_data.hpp"
#include "hypolab/scenarios.hpp"
#include "hypolab/solver.hpp"

using namespace hypolab;

namespace {

void BM_StrangStep(benchmark::State& state) {
  const GridSpec grid(static_cast<int>(state.range(0)), 32);
  const AbsorptionField field = build_scenario_field(grid, scenario_preset("cross"));
  SplitStepper stepper(grid, field.sigma());
  stepper.load(make_initial_data(grid, RandomBandLimitedData{}));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.strang(0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_StrangStep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CertifyGcc(benchmark::State& state) {
  const GridSpec grid(64, 32);
  const AbsorptionField field = build_scenario_field(grid, scenario_preset("cross"));
  const int positions = static_cast<int>(state.range(0));
  const GccSampling sampling{positions, positions / 2, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(certify_gcc(field, 2.0, sampling).c_min);
}
BENCHMARK(BM_CertifyGcc)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BogovskiiSolve(benchmark::State& state) {
  const StarDomain domain = StarDomain::disk(1.0, static_cast<int>(state.range(0)));
  const ManufacturedCase mc = default_manufactured_case(domain);
  const auto h = sample_on_domain(domain, [&](double x, double y) { return mc.divergence(x, y); });
  const BumpWeight weight(domain.ball());
  for (auto _ : state) benchmark::DoNotOptimize(bogovskii_solve(domain, h, weight).h1_norm);
}
BENCHMARK(BM_BogovskiiSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
