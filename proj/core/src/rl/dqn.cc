#include "aeronet/rl/dqn.h"

#include <cmath>
#include <ostream>

#include "aeronet/error.h"

namespace aeronet {

double EpsilonAt(const DqnConfig& config, std::int64_t step) {
  if (config.epsilon_decay_steps <= 0 || step >= config.epsilon_decay_steps) {
    return config.epsilon_end;
  }
  const double frac = static_cast<double>(step) / config.epsilon_decay_steps;
  return config.epsilon_start + frac * (config.epsilon_end - config.epsilon_start);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::Add(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

std::size_t ReplayBuffer::SampleIndex(RngStream& rng) const {
  if (items_.empty()) throw Error("sampling from an empty replay buffer");
  return static_cast<std::size_t>(rng.UniformIndex(items_.size()));
}

std::vector<const Transition*> ReplayBuffer::Sample(std::size_t n,
                                                    RngStream& rng) const {
  std::vector<const Transition*> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&items_[SampleIndex(rng)]);
  return out;
}

NStepBuilder::NStepBuilder(int n, double gamma) : n_(n), gamma_(gamma) {
  if (n < 1) throw ConfigError("n-step horizon must be at least 1");
}

Transition NStepBuilder::Build(std::size_t count) const {
  Transition t;
  t.state = pending_.front().state;
  t.action = pending_.front().action;
  double discount = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    t.n_step_return += discount * pending_[k].reward;
    discount *= gamma_;
  }
  t.state_after_n = pending_[count - 1].next_state;
  t.done = pending_[count - 1].terminal;
  t.n_actual = static_cast<int>(count);
  return t;
}

std::optional<Transition> NStepBuilder::Push(StepRecord step) {
  const bool terminal = step.terminal;
  pending_.push_back(std::move(step));
  if (terminal) return std::nullopt;  // drained by Flush()
  if (pending_.size() < static_cast<std::size_t>(n_)) return std::nullopt;
  Transition t = Build(pending_.size());
  pending_.pop_front();
  return t;
}

std::vector<Transition> NStepBuilder::Flush() {
  std::vector<Transition> out;
  while (!pending_.empty()) {
    out.push_back(Build(pending_.size()));
    pending_.pop_front();
  }
  return out;
}

double TdTarget(const Transition& t, const QNetwork& online,
                const QNetwork& target, double gamma) {
  if (t.done) return t.n_step_return;
  const std::vector<double> q_online = online.Forward(t.state_after_n);
  const int best = ActGreedy(q_online, -1);
  const double bootstrap = target.Forward(t.state_after_n)[best];
  return t.n_step_return + std::pow(gamma, t.n_actual) * bootstrap;
}

std::vector<double> TdTargets(std::span<const Transition* const> batch,
                              const QNetwork& online, const QNetwork& target,
                              double gamma) {
  std::vector<double> y;
  y.reserve(batch.size());
  for (const Transition* t : batch) y.push_back(TdTarget(*t, online, target, gamma));
  return y;
}

double TdLoss(const QNetwork& net, std::span<const Transition* const> batch,
              std::span<const double> targets, std::span<double> grad) {
  if (batch.empty()) throw ConfigError("empty training batch");
  if (targets.size() != batch.size()) throw DimensionMismatch("targets do not match batch");
  std::fill(grad.begin(), grad.end(), 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  std::vector<double> dq(net.shape().actions, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = *batch[i];
    const std::vector<double> q = net.Forward(t.state);
    const double err = q.at(t.action) - targets[i];
    loss += err * err * inv;
    std::fill(dq.begin(), dq.end(), 0.0);
    dq[t.action] = 2.0 * err * inv;
    net.AccumulateGradient(t.state, dq, grad);
  }
  return loss;
}

double TrainStep(QNetwork& online, std::span<const Transition* const> batch,
                 std::span<const double> targets, Optimizer& optimizer,
                 double clip_norm) {
  std::vector<double> grad(online.param_count(), 0.0);
  const double loss = TdLoss(online, batch, targets, grad);
  const double norm = ClipGlobalNorm(grad, clip_norm);
  if (!std::isfinite(loss) || !std::isfinite(norm)) {
    throw NonFiniteLoss("training loss is not finite");
  }
  optimizer.Step(online.params(), grad);
  return loss;
}

std::unique_ptr<Optimizer> MakeOptimizer(const DqnConfig& config) {
  if (config.optimizer == OptimizerKind::kMomentum) {
    return std::make_unique<MomentumOptimizer>(config.learning_rate, config.momentum);
  }
  return std::make_unique<AdamOptimizer>(config.learning_rate);
}

TrainResult TrainDqn(Environment& env, const DqnConfig& config, int episodes,
                     const EpisodeCallback& on_episode) {
  RngStream init_rng(config.seed, "agent-init");
  RngStream explore_rng(config.seed, "agent-exploration");
  RngStream replay_rng(config.seed, "agent-replay");

  const NetworkShape shape{env.state_dim(), config.hidden, env.action_count()};
  TrainResult result;
  result.network = QNetwork::Initialized(shape, init_rng);
  QNetwork target = result.network;
  std::unique_ptr<Optimizer> optimizer = MakeOptimizer(config);
  ReplayBuffer replay(static_cast<std::size_t>(config.buffer_capacity));
  const std::size_t warmup = static_cast<std::size_t>(
      std::max(config.warmup_transitions, config.batch_size));

  for (int episode = 0; episode < episodes; ++episode) {
    NStepBuilder nstep(config.n_step, config.gamma);
    EpisodeLog log;
    log.episode = episode;
    double loss_sum = 0.0;
    int loss_count = 0;

    std::vector<double> state = env.Reset(episode);
    for (;;) {
      const double eps = EpsilonAt(config, result.decisions);
      int action;
      if (explore_rng.Uniform() < eps) {
        action = static_cast<int>(explore_rng.UniformIndex(env.action_count()));
      } else {
        action = ActGreedy(result.network.Forward(state), env.current_action());
      }
      ++result.decisions;
      Environment::Step step = env.Act(action);
      log.episode_return += step.reward;
      if (step.handover) ++log.handovers;

      if (auto t = nstep.Push({state, action, step.reward, step.next_state, step.terminal})) {
        replay.Add(std::move(*t));
      }
      if (step.terminal || step.truncated) {
        for (Transition& t : nstep.Flush()) replay.Add(std::move(t));
      }

      if (replay.size() >= warmup && result.decisions % config.train_every == 0) {
        const std::vector<const Transition*> batch =
            replay.Sample(static_cast<std::size_t>(config.batch_size), replay_rng);
        const std::vector<double> y =
            TdTargets(batch, result.network, target, config.gamma);
        loss_sum += TrainStep(result.network, batch, y, *optimizer, config.grad_clip_norm);
        ++loss_count;
        ++result.gradient_steps;
        if (result.gradient_steps % config.target_sync_steps == 0) target = result.network;
      }

      state = std::move(step.next_state);
      if (step.terminal || step.truncated) break;
    }
    log.epsilon = EpsilonAt(config, result.decisions);
    log.loss_mean = loss_count > 0 ? loss_sum / loss_count : 0.0;
    result.curve.push_back(log);
    if (on_episode) on_episode(log);
  }
  return result;
}

void WriteLearningCurveCsv(std::ostream& out, std::span<const EpisodeLog> curve) {
  out << "episode,return,epsilon,loss_mean,handovers\n";
  for (const EpisodeLog& e : curve) {
    out << e.episode << ',' << e.episode_return << ',' << e.epsilon << ','
        << e.loss_mean << ',' << e.handovers << '\n';
  }
}

}  // namespace aeronet
