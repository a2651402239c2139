#ifndef AERONET_EXPERIMENT_RUNNER_H_
#define AERONET_EXPERIMENT_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aeronet/engine/simulation.h"
#include "aeronet/experiment/config.h"
#include "aeronet/experiment/traces.h"
#include "aeronet/rl/checkpoint.h"
#include "aeronet/rl/dqn.h"

namespace aeronet {

using ProgressFn = std::function<void(const std::string&)>;

struct RunOutput {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trajectory_seed;
  Trigger strategy = Trigger::kA3;
  RunSummary summary;
  SimSummary events;
  std::vector<std::uint64_t> trajectory_hashes;  // per UE
  std::vector<HandoverRecord> handovers;
  std::vector<FlowRow> flows;
  std::vector<SinrRow> sinr;
  std::vector<PositionRow> positions;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};
MeanStd ComputeMeanStd(std::span<const double> values);

// Scenario for one run: the config's topology with the run seed (and
// trajectory seed, when given) substituted.
Scenario BuildRunScenario(const ExperimentConfig& config, std::uint64_t seed,
                          std::optional<std::uint64_t> trajectory_seed = std::nullopt);

SimulationOptions MakeSimulationOptions(const ExperimentConfig& config, Trigger strategy,
                                        std::shared_ptr<const QNetwork> policy = nullptr);

// Loads the checkpoint and checks it fits the scenario's first interface.
Checkpoint LoadPolicy(const ExperimentConfig& config);

RunOutput RunOnce(const Scenario& scenario, const SimulationOptions& options);

// Writes handovers.csv, flows.csv, sinr.csv, positions.csv, summary.csv and
// summary.json (plus .dat copies when gnuplot is set) into dir.
void WriteRunOutputs(const RunOutput& run, const ExperimentConfig& config,
                     const std::filesystem::path& dir);

// run: one simulation per seed, outputs under out_dir/seed_<s>/ and an
// aggregate.csv across seeds.
std::vector<RunOutput> RunCommand(const ExperimentConfig& config, const ProgressFn& progress = {});

struct CompareRow {
  Trigger strategy = Trigger::kA3;
  MeanStd throughput_bps;
  MeanStd handovers;
  MeanStd pingpongs;
  int runs = 0;
};
struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<RunOutput> runs;
};
// Every strategy over trajectory_seeds x seeds. Throws TrajectoryMismatch
// if two runs that should share a trajectory did not.
CompareResult CompareCommand(const ExperimentConfig& config, const ProgressFn& progress = {});

struct SweepPoint {
  double value = 0.0;
  std::vector<RunSummary> per_seed;
  MeanStd throughput_bps;
  MeanStd loss_rate;
  MeanStd handovers;
  MeanStd pingpongs;
};
std::vector<SweepPoint> SweepCommand(const ExperimentConfig& config,
                                     const ProgressFn& progress = {});

struct TrainOutput {
  Checkpoint checkpoint;
  std::vector<EpisodeLog> curve;
  std::filesystem::path checkpoint_path;
};
TrainOutput TrainCommand(const ExperimentConfig& config, const ProgressFn& progress = {});

}  // namespace aeronet

#endif  // AERONET_EXPERIMENT_RUNNER_H_
