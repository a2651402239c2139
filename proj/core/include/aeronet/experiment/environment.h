#ifndef AERONET_EXPERIMENT_ENVIRONMENT_H_
#define AERONET_EXPERIMENT_ENVIRONMENT_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "aeronet/engine/simulation.h"
#include "aeronet/rl/dqn.h"
#include "aeronet/rl/observation.h"
#include "aeronet/topology/scenario.h"

namespace aeronet {

struct HandoverEnvironmentConfig {
  SimulationOptions simulation;
  RewardSpec reward;
  ObservationConfig observation;
  double episode_s = 60.0;
  // Episode k flies a fresh random-waypoint route from a random start;
  // seeds are derived from this value and k.
  std::uint64_t seed = 1;
  bool randomize_start = true;
};

// The handover problem of one UE interface as an episodic environment.
// Decisions are taken every decision epoch; the action is an index into
// the interface's candidate gNBs, and choosing the serving gNB is a no-op.
class HandoverEnvironment : public Environment {
 public:
  HandoverEnvironment(Scenario base, HandoverEnvironmentConfig config);

  int state_dim() const override;
  int action_count() const override;
  std::vector<double> Reset(int episode) override;
  Step Act(int action) override;
  int current_action() const override;

  const std::vector<NodeId>& candidates() const { return candidates_; }
  const Simulation* simulation() const { return sim_.get(); }

  // Scenario flown in a given training episode.
  Scenario EpisodeScenario(int episode) const;

 private:
  std::vector<double> Observe() const;

  Scenario base_;
  HandoverEnvironmentConfig config_;
  std::vector<NodeId> candidates_;
  std::unique_ptr<Simulation> sim_;
  Tick epoch_ = 1000;
};

}  // namespace aeronet

#endif  // AERONET_EXPERIMENT_ENVIRONMENT_H_
