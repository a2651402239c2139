#ifndef AERONET_RL_DQN_H_
#define AERONET_RL_DQN_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "aeronet/rl/network.h"
#include "aeronet/rl/observation.h"
#include "aeronet/sim/rng.h"

namespace aeronet {

enum class OptimizerKind { kAdam, kMomentum };

struct DqnConfig {
  double gamma = 0.99;
  int n_step = 3;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int buffer_capacity = 50000;
  int target_sync_steps = 500;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_steps = 10000;
  std::vector<int> hidden = {64, 64};
  double grad_clip_norm = 10.0;
  // Transitions collected before the first gradient step.
  int warmup_transitions = 64;
  // Gradient steps per environment step.
  int train_every = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double momentum = 0.9;
  std::uint64_t seed = 1;
};

// Linear decay from epsilon_start to epsilon_end over epsilon_decay_steps
// decisions, constant afterwards.
double EpsilonAt(const DqnConfig& config, std::int64_t step);

struct Transition {
  std::vector<double> state;
  int action = 0;
  double n_step_return = 0.0;
  std::vector<double> state_after_n;
  bool done = false;
  int n_actual = 1;
};

// Fixed-capacity FIFO ring with uniform sampling with replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Add(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // Slot index of the oldest element.
  std::size_t head() const { return head_; }
  const Transition& at(std::size_t slot) const { return items_[slot]; }

  std::size_t SampleIndex(RngStream& rng) const;
  std::vector<const Transition*> Sample(std::size_t n, RngStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> items_;
};

struct StepRecord {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Turns a stream of one-step records into N-step transitions.
class NStepBuilder {
 public:
  NStepBuilder(int n, double gamma);

  // Returns the transition that became complete, if any.
  std::optional<Transition> Push(StepRecord step);
  // Emits the remaining partial transitions at the end of an episode.
  std::vector<Transition> Flush();

 private:
  Transition Build(std::size_t count) const;

  int n_;
  double gamma_;
  std::deque<StepRecord> pending_;
};

// y = R + gamma^n * Q_target(s', argmax_a Q_online(s', a)) * (1 - done)
double TdTarget(const Transition& t, const QNetwork& online,
                const QNetwork& target, double gamma);
std::vector<double> TdTargets(std::span<const Transition* const> batch,
                              const QNetwork& online, const QNetwork& target,
                              double gamma);

// Mean-squared error between Q(s_i, a_i) and targets_i, and its gradient
// with respect to the parameters (grad is overwritten).
double TdLoss(const QNetwork& net, std::span<const Transition* const> batch,
              std::span<const double> targets, std::span<double> grad);

// One gradient step on the batch. Returns the pre-step loss. Throws
// NonFiniteLoss if the loss or gradient is not finite.
double TrainStep(QNetwork& online, std::span<const Transition* const> batch,
                 std::span<const double> targets, Optimizer& optimizer,
                 double clip_norm);

std::unique_ptr<Optimizer> MakeOptimizer(const DqnConfig& config);

// An episodic environment with a discrete action space.
class Environment {
 public:
  struct Step {
    std::vector<double> next_state;
    double reward = 0.0;
    bool terminal = false;   // true end of the task: no bootstrap
    bool truncated = false;  // time limit: bootstrap from next_state
    bool handover = false;
  };

  virtual ~Environment() = default;
  virtual int state_dim() const = 0;
  virtual int action_count() const = 0;
  virtual std::vector<double> Reset(int episode) = 0;
  virtual Step Act(int action) = 0;
  // Action that corresponds to "do nothing" in the current state, or -1.
  virtual int current_action() const { return -1; }
};

struct EpisodeLog {
  int episode = 0;
  double episode_return = 0.0;
  double epsilon = 0.0;
  double loss_mean = 0.0;
  int handovers = 0;
};

struct TrainResult {
  QNetwork network;
  std::vector<EpisodeLog> curve;
  std::int64_t decisions = 0;
  std::int64_t gradient_steps = 0;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

// Offline epsilon-greedy training with replay, N-step returns, Double-DQN
// targets and a periodically synchronised target network.
TrainResult TrainDqn(Environment& env, const DqnConfig& config, int episodes,
                     const EpisodeCallback& on_episode = {});

// episode,return,epsilon,loss_mean,handovers
void WriteLearningCurveCsv(std::ostream& out, std::span<const EpisodeLog> curve);

}  // namespace aeronet

#endif  // AERONET_RL_DQN_H_
