#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hgamma/cc_metric.hpp"
#include "hgamma/energies.hpp"
#include "hgamma/gamma_harness.hpp"
#include "hgamma/recovery.hpp"

using namespace hgamma;

static void BM_DistanceField(benchmark::State& state) {
  const auto spec = LatticeSpec::covering_ball(1, 0.8, 0.05 * 2.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(distance_field(TargetSet::at(HPoint::identity(1)), spec));
  state.counters["nodes"] = static_cast<double>(spec.node_count());
}
BENCHMARK(BM_DistanceField)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_EnergyG(benchmark::State& state) {
  const auto p = EnergyParams::from_kappa(0.05, std::numbers::pi);
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = 0.5 + 0.5 * std::tanh((i / double(m - 1) - 0.5) * 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(energy_G(v, -0.5, 0.5, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnergyG)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_LemmaCalculation(benchmark::State& state) {
  const auto p = ProfileParams::from(EnergyParams::from_kappa(0.025, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(lemma_calculation(p));
}
BENCHMARK(BM_LemmaCalculation);

static void BM_SliceEnergy(benchmark::State& state) {
  const auto p = ProfileParams::from(EnergyParams::from_kappa(0.05, std::numbers::pi));
  double s = -0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slice_energy(s, 0.25, p));
    s = s > 0.4 ? -0.4 : s + 0.0137;
  }
}
BENCHMARK(BM_SliceEnergy);

static void BM_RecoveryEnergy(benchmark::State& state) {
  const auto p = ProfileParams::from(EnergyParams::from_kappa(0.05, std::numbers::pi));
  for (auto _ : state) benchmark::DoNotOptimize(recovery_energy([](double) { return 1.0; }, 0.25, p));
}
BENCHMARK(BM_RecoveryEnergy)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
