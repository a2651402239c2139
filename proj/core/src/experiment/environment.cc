#include "aeronet/experiment/environment.h"

#include <algorithm>

#include "aeronet/error.h"
#include "aeronet/handover/handover.h"

namespace aeronet {

HandoverEnvironment::HandoverEnvironment(Scenario base, HandoverEnvironmentConfig config)
    : base_(std::move(base)), config_(std::move(config)) {
  if (base_.ues.empty() || base_.ues[0].interfaces.empty()) {
    throw ConfigError("training needs a scenario with at least one UE interface");
  }
  candidates_ = base_.ues[0].interfaces[0].candidate_gnbs;
  config_.simulation.external_decisions = true;
  config_.simulation.record_traces = false;
  config_.simulation.duration_s = config_.episode_s;
  epoch_ = ToTicks(config_.simulation.handover.decision_epoch_s);
  if (epoch_ <= 0) throw ConfigError("decision epoch must be positive");
}

int HandoverEnvironment::state_dim() const {
  return StateDimension(static_cast<int>(candidates_.size()));
}

int HandoverEnvironment::action_count() const { return static_cast<int>(candidates_.size()); }

Scenario HandoverEnvironment::EpisodeScenario(int episode) const {
  Scenario s = base_;
  const auto k = static_cast<std::uint64_t>(episode);
  s.seed = Fnv1a64("episode-seed", config_.seed * 0x9e3779b97f4a7c15ULL + k);
  s.trajectory_seed = Fnv1a64("episode-trajectory", config_.seed * 0x9e3779b97f4a7c15ULL + k);
  s.duration_s = config_.episode_s;
  if (config_.randomize_start) {
    RngStream rng(config_.seed, "episode-start", k);
    for (UeConfig& ue : s.ues) {
      if (ue.mobility.kind != MobilityKind::kRandomWaypoint3D) continue;
      const Box& b = ue.mobility.bounds;
      ue.initial_position = {rng.Uniform(b.min.x, b.max.x), rng.Uniform(b.min.y, b.max.y),
                             rng.Uniform(b.min.z, b.max.z)};
    }
  }
  return s;
}

std::vector<double> HandoverEnvironment::Observe() const {
  const DecisionContext ctx = sim_->Context(0, ToSeconds(epoch_));
  return ObserveInterface(ctx, config_.observation).Flatten();
}

std::vector<double> HandoverEnvironment::Reset(int episode) {
  sim_ = std::make_unique<Simulation>(EpisodeScenario(episode), config_.simulation);
  sim_->RunUntil(epoch_);
  return Observe();
}

int HandoverEnvironment::current_action() const {
  return static_cast<int>(sim_->manager(0).CandidateIndex(sim_->manager(0).serving()));
}

Environment::Step HandoverEnvironment::Act(int action) {
  if (action < 0 || action >= action_count()) throw InvalidTarget("action out of range");
  Step step;
  const NodeId target = candidates_[static_cast<std::size_t>(action)];
  if (target != sim_->manager(0).serving()) {
    step.handover = sim_->Handover(0, target, Trigger::kDqn).has_value();
  }
  sim_->RunUntil(sim_->now() + epoch_);
  const HandoverManager& m = sim_->manager(0);
  const double sinr = NormalizeSinr(m.window().Average(m.serving()).value_or(-1e9),
                                    config_.observation);
  const double throughput = std::clamp(
      sim_->InterfaceThroughputBps(0, ToSeconds(epoch_)) / sim_->CapacityMaxBps(0), 0.0, 1.0);
  step.reward = Reward(config_.reward, sinr, throughput, step.handover);
  step.next_state = Observe();
  step.truncated = sim_->now() >= sim_->end();
  return step;
}

}  // namespace aeronet
