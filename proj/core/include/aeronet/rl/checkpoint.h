#ifndef AERONET_RL_CHECKPOINT_H_
#define AERONET_RL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aeronet/rl/dqn.h"
#include "aeronet/rl/network.h"
#include "aeronet/rl/observation.h"

namespace aeronet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  QNetwork network;
  ObservationConfig observation;
  RewardSpec reward;
  DqnConfig dqn;
  // Action index -> gNB id for the interface the policy controls.
  std::vector<std::uint32_t> candidate_gnbs;
  int interface_group = 0;
  int episodes_trained = 0;
};

// Binary container: 8-byte magic "AERONETQ", u32 format version, u32 length
// of a JSON header (shapes, hyperparameters, normalisation constants), then
// the parameters as little-endian IEEE-754 doubles in layout order. A
// human-readable summary is written next to it as <path>.txt.
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

// Throws ConfigError on a missing file, bad magic, unsupported version or
// truncated payload.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace aeronet

#endif  // AERONET_RL_CHECKPOINT_H_
