#include <benchmark/benchmark.h>

#include "arpsim/dynamics.hpp"
#include "arpsim/multijump.hpp"
#include "arpsim/scan.hpp"
#include "arpsim/special_functions.hpp"

using namespace arpsim;

static void BM_PropagateNoiseless(benchmark::State& state) {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const IntegratorSettings settings;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(sweep, {}, settings).final_excited_pop);
}
BENCHMARK(BM_PropagateNoiseless)->Unit(benchmark::kMillisecond);

static void BM_PropagateNoisy(benchmark::State& state) {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  IntegratorSettings settings;
  settings.method = state.range(0) == 0 ? IntegratorMethod::adaptive_rk45 : IntegratorMethod::fixed_rk4;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(sweep, {1.0, 6.0, 0.3}, settings).final_excited_pop);
}
BENCHMARK(BM_PropagateNoisy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MultijumpEfficiency(benchmark::State& state) {
  const SweepConfig sweep{1.0, 0.4, -20.0, 20.0};
  for (auto _ : state) benchmark::DoNotOptimize(multijump_efficiency(sweep, {5.0, 8.68, 0.0}));
}
BENCHMARK(BM_MultijumpEfficiency);

static void BM_PhaseAveraged(benchmark::State& state) {
  const SweepConfig sweep{1.0, 0.2, -10.0, 10.0};
  const EngineSettings engine;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phase_averaged_efficiency(sweep, {1.0, 2.0, 0.0}, PhaseAverageSpec{}, engine));
  }
}
BENCHMARK(BM_PhaseAveraged)->Unit(benchmark::kMillisecond);

static void BM_BesselJ(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_j(order, x));
    x = x < 50.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(5)->Arg(60);
BENCHMARK_MAIN();
