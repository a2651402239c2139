#ifndef AERONET_EXPERIMENT_CONFIG_H_
#define AERONET_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aeronet/channel/channel.h"
#include "aeronet/handover/handover.h"
#include "aeronet/rl/dqn.h"
#include "aeronet/rl/observation.h"
#include "aeronet/transport/flow.h"
#include "aeronet/transport/link.h"

namespace aeronet {

struct TrainingConfig {
  int episodes = 500;
  double episode_s = 60.0;
  DqnConfig dqn;
};

enum class SweepAxis { kUeCount, kA3Offset, kRewardWeights };
SweepAxis ParseSweepAxis(const std::string& name);
std::string SweepAxisName(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kUeCount;
  std::vector<double> values;
};

// Everything a CLI command needs. Loaded from a scenario file whose
// optional "experiment" object carries the non-topology settings; command
// line flags override individual fields afterwards.
struct ExperimentConfig {
  std::filesystem::path scenario_path;
  nlohmann::json scenario_json;
  Trigger strategy = Trigger::kA3;
  Protocol transport = Protocol::kQuic;
  double cbr_rate_bps = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> trajectory_seeds;
  std::optional<std::filesystem::path> checkpoint;
  std::filesystem::path out_dir = "out";
  bool gnuplot = false;
  std::optional<double> duration_s;

  ChannelConfig channel;
  LinkConfig link;
  HandoverConfig handover;
  ObservationConfig observation;
  RewardSpec reward;
  TrainingConfig training;
  std::optional<SweepSpec> sweep;
  std::vector<Trigger> compare_strategies = {Trigger::kA3, Trigger::kUcb, Trigger::kDqn};
};

// Throws ConfigError / SchemaError.
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc,
                                       const std::filesystem::path& path);

// Rejects inconsistent settings (empty seed list, non-increasing sweep
// values, ...). Throws ConfigError.
void ValidateExperimentConfig(const ExperimentConfig& config);

}  // namespace aeronet

#endif  // AERONET_EXPERIMENT_CONFIG_H_
