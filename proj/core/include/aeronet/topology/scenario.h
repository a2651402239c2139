#ifndef AERONET_TOPOLOGY_SCENARIO_H_
#define AERONET_TOPOLOGY_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "aeronet/geometry.h"
#include "aeronet/mobility/mobility.h"

namespace aeronet {

using NodeId = std::uint32_t;

// Defaults for parameters the scenario file may omit.
inline constexpr double kDefaultGnbHeightM = 25.0;
inline constexpr double kDefaultGnbPowerDbm = 44.0;
inline constexpr double kDefaultUePowerDbm = 23.0;
inline constexpr double kDefaultNoiseFigureDb = 5.0;
inline constexpr double kDefaultBandwidthMhz = 20.0;
inline constexpr double kDefaultPlacementRadiusM = 300.0;

// Carrier of an interface group when the file does not give one.
double DefaultCarrierGhz(int interface_group);

struct GnbConfig {
  NodeId id = 0;
  Vec3 position;
  double carrier_freq_ghz = 2.6;
  double bandwidth_mhz = kDefaultBandwidthMhz;
  double tx_power_dbm = kDefaultGnbPowerDbm;
  int interface_group = 0;
  double noise_figure_db = kDefaultNoiseFigureDb;
};

struct InterfaceBinding {
  int interface_group = 0;
  std::optional<NodeId> serving_gnb;
  std::vector<NodeId> candidate_gnbs;
};

struct UeConfig {
  NodeId id = 0;
  Vec3 initial_position;
  double tx_power_dbm = kDefaultUePowerDbm;
  MobilitySpec mobility;
  std::vector<InterfaceBinding> interfaces;
};

struct Area {
  double x_m = 0.0;
  double y_m = 0.0;
  double z_max_m = 0.0;

  Box AsBox() const { return Box{{0.0, 0.0, 0.0}, {x_m, y_m, z_max_m}}; }
};

struct Scenario {
  std::vector<GnbConfig> gnbs;
  std::vector<UeConfig> ues;
  Area area;
  double duration_s = 0.0;
  std::uint64_t seed = 1;
  // Seeds UE mobility when set, so trajectories can be held fixed while
  // the run seed varies.
  std::optional<std::uint64_t> trajectory_seed;

  std::uint64_t mobility_seed() const { return trajectory_seed.value_or(seed); }
  const GnbConfig& gnb(NodeId id) const;
  std::size_t GnbIndex(NodeId id) const;
};

// Resolves a scenario description (schema documented in README.md).
// Relative trajectory_file paths are resolved against base_dir. Random UE
// placement draws from RngStream(seed, "topology").
// Throws SchemaError (with the JSON path of the offending field) or
// ConstraintError.
Scenario BuildScenario(const nlohmann::json& spec,
                       const std::filesystem::path& base_dir = {});

// Re-checks every scenario invariant; BuildScenario calls this last.
void ValidateScenario(const Scenario& scenario);

struct CandidateSinr {
  NodeId gnb = 0;
  double sinr_db = 0.0;
};

// Initial attach rule: highest SINR, ties to the lowest gNB id.
// Throws NoCandidates on an empty list.
NodeId SelectServing(std::span<const CandidateSinr> candidates);

}  // namespace aeronet

#endif  // AERONET_TOPOLOGY_SCENARIO_H_
