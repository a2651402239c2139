#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "aeronet/error.h"
#include "aeronet/rl/dqn.h"
#include "support/rl_checks.h"
#include "support/toy_mdp.h"

namespace aeronet {
namespace {

QNetwork BiasOnly(double value, const std::vector<double>& advantage) {
  const int actions = static_cast<int>(advantage.size());
  QNetwork net(NetworkShape{1, {}, actions});
  auto p = net.params();
  p[net.value_weight_offset() + 1] = value;
  for (int a = 0; a < actions; ++a) p[net.advantage_weight_offset() + a * 2 + 1] = advantage[a];
  return net;
}

Transition Make(double n_step_return, int n_actual, bool done) {
  Transition t;
  t.state = {0.0};
  t.state_after_n = {0.0};
  t.n_step_return = n_step_return;
  t.n_actual = n_actual;
  t.done = done;
  return t;
}

TEST(TdTarget, ThreeStepBootstrap) {
  NStepBuilder nstep(3, 0.9);
  for (int i = 0; i < 2; ++i) {
    EXPECT_FALSE(nstep.Push({{0.0}, 0, 1.0, {0.0}, false}).has_value());
  }
  const auto t = nstep.Push({{0.0}, 0, 1.0, {0.0}, false});
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(t->n_step_return, 2.71, 1e-12);
  EXPECT_EQ(t->n_actual, 3);
  // Online prefers action 1; the target network values it at 2.
  const QNetwork online = BiasOnly(0.0, {0.0, 1.0});
  const QNetwork target = BiasOnly(3.0, {1.5, -1.5});  // Q = [4.5, 1.5]
  const QNetwork target2 = BiasOnly(2.0, {0.0, 0.0});  // Q = [2, 2]
  EXPECT_NEAR(TdTarget(*t, online, target2, 0.9), 4.168, 1e-12);
  EXPECT_NEAR(TdTarget(*t, online, target, 0.9), 2.71 + 0.729 * 1.5, 1e-12);
}

TEST(TdTarget, DoneDoesNotBootstrap) {
  const QNetwork net = BiasOnly(5.0, {0.0, 0.0});
  EXPECT_EQ(TdTarget(Make(1.25, 2, true), net, net, 0.99), 1.25);
}

TEST(TdTarget, ZeroDiscountKeepsFirstReward) {
  NStepBuilder nstep(3, 0.0);
  nstep.Push({{0.0}, 0, 0.7, {0.0}, false});
  nstep.Push({{0.0}, 0, 5.0, {0.0}, false});
  const auto t = nstep.Push({{0.0}, 0, 9.0, {0.0}, false});
  ASSERT_TRUE(t.has_value());
  const QNetwork net = BiasOnly(5.0, {0.0, 0.0});
  EXPECT_EQ(TdTarget(*t, net, net, 0.0), 0.7);
}

TEST(TdTarget, DoubleDqnDecouplesSelectionAndEvaluation) {
  const testing::CheckResult r = testing::CheckDoubleDqnTarget();
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(NStepBuilder, EpisodeEndFlushesShorterReturns) {
  NStepBuilder nstep(3, 0.5);
  int emitted = 0;
  for (int i = 0; i < 4; ++i) {
    if (nstep.Push({{double(i)}, i, 1.0, {double(i + 1)}, false})) ++emitted;
  }
  EXPECT_EQ(emitted, 2);
  EXPECT_FALSE(nstep.Push({{4.0}, 4, 2.0, {5.0}, true}).has_value());
  const std::vector<Transition> rest = nstep.Flush();
  ASSERT_EQ(rest.size(), 3u);
  EXPECT_EQ(rest[0].action, 2);
  EXPECT_EQ(rest[0].n_actual, 3);
  EXPECT_DOUBLE_EQ(rest[0].n_step_return, 1.0 + 0.5 + 0.25 * 2.0);
  EXPECT_EQ(rest[1].n_actual, 2);
  EXPECT_DOUBLE_EQ(rest[1].n_step_return, 1.0 + 0.5 * 2.0);
  EXPECT_EQ(rest[2].n_actual, 1);
  EXPECT_DOUBLE_EQ(rest[2].n_step_return, 2.0);
  for (const Transition& t : rest) {
    EXPECT_TRUE(t.done);
    EXPECT_EQ(t.state_after_n, std::vector<double>{5.0});
  }
  EXPECT_TRUE(nstep.Flush().empty());
}

TEST(NStepBuilder, TruncatedEpisodeStillBootstraps) {
  NStepBuilder nstep(3, 0.9);
  nstep.Push({{0.0}, 0, 1.0, {1.0}, false});
  const std::vector<Transition> rest = nstep.Flush();
  ASSERT_EQ(rest.size(), 1u);
  EXPECT_FALSE(rest[0].done);
  EXPECT_EQ(rest[0].n_actual, 1);
}

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer buffer(3);
  for (int i = 0; i < 5; ++i) buffer.Add(Make(i, 1, false));
  EXPECT_EQ(buffer.size(), 3u);
  std::vector<double> kept;
  for (std::size_t k = 0; k < 3; ++k) {
    kept.push_back(buffer.at((buffer.head() + k) % 3).n_step_return);
  }
  EXPECT_EQ(kept, (std::vector<double>{2.0, 3.0, 4.0}));
}

TEST(ReplayBuffer, SamplingIsUniform) {
  constexpr int kSlots = 10;
  constexpr int kDraws = 100000;
  ReplayBuffer buffer(kSlots);
  for (int i = 0; i < kSlots; ++i) buffer.Add(Make(i, 1, false));
  RngStream rng(4, "replay");
  std::vector<int> hits(kSlots, 0);
  for (int i = 0; i < kDraws; ++i) ++hits[buffer.SampleIndex(rng)];
  const double expected = double(kDraws) / kSlots;
  double chi2 = 0.0;
  for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
  // 99th percentile of chi-square with 9 degrees of freedom.
  EXPECT_LT(chi2, 21.666);
}

TEST(TrainStep, ZeroErrorLeavesWeightsUnchanged) {
  RngStream rng(5, "init");
  QNetwork net = QNetwork::Initialized(NetworkShape{3, {4}, 2}, rng);
  Transition t;
  t.state = {0.1, 0.2, 0.3};
  t.action = 1;
  const std::vector<const Transition*> batch{&t};
  const std::vector<double> y{net.Forward(t.state)[1]};
  const std::vector<double> before(net.params().begin(), net.params().end());
  AdamOptimizer adam(1e-3);
  EXPECT_EQ(TrainStep(net, batch, y, adam, 10.0), 0.0);
  EXPECT_EQ(std::vector<double>(net.params().begin(), net.params().end()), before);
}

TEST(TrainStep, OverfitsOneSample) {
  RngStream rng(6, "init");
  QNetwork net = QNetwork::Initialized(NetworkShape{3, {8}, 2}, rng);
  Transition t;
  t.state = {0.5, -0.2, 0.9};
  t.action = 0;
  const std::vector<const Transition*> batch{&t};
  const std::vector<double> y{1.5};
  MomentumOptimizer gd(0.01, 0.0);
  double previous = std::numeric_limits<double>::infinity();
  double first = 0.0;
  for (int step = 0; step < 500; ++step) {
    const double loss = TrainStep(net, batch, y, gd, 10.0);
    if (step == 0) first = loss;
    // Below 1e-20 the loss is rounding noise around zero.
    if (step >= 10 && previous > 1e-20) {
      ASSERT_LE(loss, previous) << "step " << step;
    }
    previous = loss;
  }
  EXPECT_LT(previous, 1e-3 * first);
}

TEST(TrainStep, NonFiniteLossAborts) {
  QNetwork net(NetworkShape{1, {}, 2});
  Transition t = Make(0.0, 1, false);
  const std::vector<const Transition*> batch{&t};
  const std::vector<double> y{std::numeric_limits<double>::quiet_NaN()};
  AdamOptimizer adam(1e-3);
  EXPECT_THROW(TrainStep(net, batch, y, adam, 10.0), NonFiniteLoss);
}

TEST(Epsilon, ScheduleEndpoints) {
  DqnConfig config;
  EXPECT_EQ(EpsilonAt(config, 0), 1.0);
  EXPECT_NEAR(EpsilonAt(config, config.epsilon_decay_steps / 2), 0.525, 1e-12);
  EXPECT_NEAR(EpsilonAt(config, config.epsilon_decay_steps), 0.05, 1e-12);
  EXPECT_NEAR(EpsilonAt(config, 1'000'000'000), 0.05, 1e-12);
}

TEST(TrainDqn, ToyMdpReachesOptimalPolicy) {
  const testing::CheckResult r = testing::CheckToyMdpTraining(200, 1);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(TrainDqn, SameSeedSameCurve) {
  auto run = [](std::uint64_t seed) {
    testing::TabularEnvironment env(testing::TwoStateMdp(), 20);
    return TrainDqn(env, testing::ToyMdpConfig(seed), 40);
  };
  const TrainResult a = run(7);
  const TrainResult b = run(7);
  const TrainResult c = run(8);
  ASSERT_EQ(a.curve.size(), 40u);
  bool differs = false;
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].episode_return, b.curve[i].episode_return);
    EXPECT_EQ(a.curve[i].loss_mean, b.curve[i].loss_mean);
    differs |= a.curve[i].episode_return != c.curve[i].episode_return;
  }
  EXPECT_TRUE(std::equal(a.network.params().begin(), a.network.params().end(),
                         b.network.params().begin()));
  EXPECT_TRUE(differs);
}

}  // namespace
}  // namespace aeronet
