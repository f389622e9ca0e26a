#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "pendsim/closed_loop.hpp"
#include "pendsim/experiments.hpp"

using namespace pendsim;

static void BM_ReducedRhs(benchmark::State& state) {
  const ReducedSystem sys(make_reduced_model({}, {}, ConstsOverride{}), Disturbance::zero());
  const std::array<double, 4> y{-0.7, 0.7, 1.0, 0.5};
  std::array<double, 4> d{};
  for (auto _ : state) {
    sys.rhs(0.0, y, 0.0, d);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_ReducedRhs);

static void BM_FullRhs(benchmark::State& state) {
  const FullSystem sys({}, {}, Disturbance::zero());
  const std::array<double, 4> y{0.3, -0.2, 0.4, 0.1};
  std::array<double, 4> d{};
  for (auto _ : state) {
    sys.rhs(0.0, y, 0.0, d);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_FullRhs);

static void BM_SingularRhs(benchmark::State& state) {
  const SingularSystem sys({}, {}, 0.01, Disturbance::zero(), false);
  const std::array<double, 6> y{-0.7, 0.7, 1.0, 0.5, 0.2, 0.2};
  std::array<double, 6> d{};
  for (auto _ : state) {
    sys.rhs(0.0, y, 0.0, d);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_SingularRhs);

static void BM_RunScenario(benchmark::State& state) {
  const std::vector<ScenarioConfig> presets{preset_free_decay(), preset_relay(),
                                            preset_sinusoid_relay(), preset_mu_sweep()};
  const ScenarioConfig& cfg = presets[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(cfg.name);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg));
  }
}
BENCHMARK(BM_RunScenario)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_MuSweep(benchmark::State& state) {
  const ScenarioConfig cfg = preset_mu_sweep();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_mu(cfg, {0.1, 0.03, 0.01, 0.003}));
  }
}
BENCHMARK(BM_MuSweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
