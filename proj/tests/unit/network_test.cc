#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aeronet/error.h"
#include "aeronet/rl/network.h"
#include "support/rl_checks.h"

namespace aeronet {
namespace {

// A network with no hidden layer whose heads are pure biases.
QNetwork BiasOnly(double value, const std::vector<double>& advantage) {
  const int actions = static_cast<int>(advantage.size());
  QNetwork net(NetworkShape{2, {}, actions});
  auto p = net.params();
  const std::size_t h = 2;
  p[net.value_weight_offset() + h] = value;
  for (int a = 0; a < actions; ++a) {
    p[net.advantage_weight_offset() + a * (h + 1) + h] = advantage[a];
  }
  return net;
}

TEST(QNetwork, DuelingCombination) {
  const QNetwork net = BiasOnly(1.0, {1.0, 2.0, 3.0});
  const std::vector<double> s{0.3, -0.7};
  const std::vector<double> q = net.Forward(s);
  ASSERT_EQ(q.size(), 3u);
  EXPECT_DOUBLE_EQ(q[0], 0.0);
  EXPECT_DOUBLE_EQ(q[1], 1.0);
  EXPECT_DOUBLE_EQ(q[2], 2.0);
  const QNetwork::Heads heads = net.ForwardHeads(s);
  EXPECT_DOUBLE_EQ(heads.value, 1.0);
  EXPECT_EQ(heads.advantage, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(QNetwork, ZeroWeightsGiveZeroQ) {
  const QNetwork net(NetworkShape{5, {7, 3}, 4});
  const std::vector<double> s{1, 2, 3, 4, 5};
  for (double q : net.Forward(s)) EXPECT_EQ(q, 0.0);
}

TEST(QNetwork, ParameterCount) {
  const QNetwork net(NetworkShape{10, {64, 64}, 3});
  const std::size_t trunk = (10 * 64 + 64) + (64 * 64 + 64);
  const std::size_t heads = 65 + 3 * 65;
  EXPECT_EQ(net.param_count(), trunk + heads);
}

TEST(QNetwork, DimensionMismatch) {
  const QNetwork net(NetworkShape{4, {8}, 2});
  const std::vector<double> s(3, 0.0);
  EXPECT_THROW(net.Forward(s), DimensionMismatch);
}

TEST(QNetwork, InitializationRespectsFanIn) {
  RngStream rng(3, "init");
  const QNetwork net = QNetwork::Initialized(NetworkShape{16, {}, 2}, rng);
  const double bound = 1.0 / std::sqrt(16.0);
  for (double w : net.params()) EXPECT_LE(std::abs(w), bound);
}

TEST(QNetwork, GradientMatchesFiniteDifferences) {
  EXPECT_LT(testing::MaxGradientRelativeError(NetworkShape{4, {2}, 2}, 1), 1e-4);
  EXPECT_LT(testing::MaxGradientRelativeError(NetworkShape{6, {8, 8}, 4}, 2), 1e-4);
  EXPECT_LT(testing::MaxGradientRelativeError(NetworkShape{3, {}, 3}, 3), 1e-4);
}

TEST(QNetwork, DuelingInvariance) {
  const testing::CheckResult r = testing::CheckDuelingInvariance(1, 1000);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ClipGlobalNorm, RescalesOnlyAboveThreshold) {
  std::vector<double> g{3.0, 4.0};
  EXPECT_DOUBLE_EQ(ClipGlobalNorm(g, 10.0), 5.0);
  EXPECT_EQ(g, (std::vector<double>{3.0, 4.0}));
  EXPECT_DOUBLE_EQ(ClipGlobalNorm(g, 1.0), 5.0);
  EXPECT_NEAR(g[0], 0.6, 1e-15);
  EXPECT_NEAR(g[1], 0.8, 1e-15);
  EXPECT_NEAR(GlobalNorm(g), 1.0, 1e-15);
}

TEST(Optimizers, AdamFirstStepHasLearningRateMagnitude) {
  AdamOptimizer adam(0.01);
  std::vector<double> p{1.0, -1.0, 0.0};
  const std::vector<double> g{2.0, -0.5, 0.0};
  adam.Step(p, g);
  EXPECT_NEAR(p[0], 0.99, 1e-6);
  EXPECT_NEAR(p[1], -0.99, 1e-6);
  EXPECT_EQ(p[2], 0.0);
}

TEST(Optimizers, MomentumAccumulates) {
  MomentumOptimizer sgd(0.1, 0.9);
  std::vector<double> p{0.0};
  const std::vector<double> g{1.0};
  sgd.Step(p, g);
  EXPECT_NEAR(p[0], -0.1, 1e-15);
  sgd.Step(p, g);
  EXPECT_NEAR(p[0], -0.1 - 0.19, 1e-15);
}

TEST(Optimizers, AdamMinimisesQuadratic) {
  AdamOptimizer adam(0.05);
  std::vector<double> p{3.0, -2.0};
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> g{2.0 * p[0], 2.0 * p[1]};
    adam.Step(p, g);
  }
  EXPECT_NEAR(p[0], 0.0, 1e-2);
  EXPECT_NEAR(p[1], 0.0, 1e-2);
}

}  // namespace
}  // namespace aeronet
