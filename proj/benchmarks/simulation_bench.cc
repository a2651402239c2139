#include <benchmark/benchmark.h>

#include <filesystem>

#include "aeronet/experiment/config.h"
#include "aeronet/experiment/runner.h"

namespace aeronet {
namespace {

// Simulated seconds per wall-clock second for a shipped scenario.
void RunScenario(benchmark::State& state, const char* file, double seconds) {
  ExperimentConfig config =
      LoadExperimentConfig(std::filesystem::path(AERONET_BENCH_SCENARIO_DIR) / file);
  config.duration_s = seconds;
  SimulationOptions options = MakeSimulationOptions(config, Trigger::kA3);
  options.record_traces = false;
  const Scenario scenario = BuildRunScenario(config, 1);
  for (auto _ : state) {
    Simulation sim(scenario, options);
    benchmark::DoNotOptimize(sim.Run());
  }
  state.counters["sim_s"] = benchmark::Counter(seconds * state.iterations(),
                                               benchmark::Counter::kIsRate);
}

void BM_SingleUav(benchmark::State& state) { RunScenario(state, "fig6_mobility.json", 60.0); }
BENCHMARK(BM_SingleUav)->Unit(benchmark::kMillisecond);

void BM_Swarm21(benchmark::State& state) { RunScenario(state, "fig7_scalability.json", 10.0); }
BENCHMARK(BM_Swarm21)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace aeronet
BENCHMARK_MAIN();
