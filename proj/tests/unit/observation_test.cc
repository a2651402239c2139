#include <gtest/gtest.h>

#include <optional>
#include <vector>

#include "aeronet/error.h"
#include "aeronet/rl/observation.h"
#include "support/properties.h"

namespace aeronet {
namespace {

TEST(Observe, SinrScaling) {
  EXPECT_DOUBLE_EQ(NormalizeSinr(15.0), 0.5);
  EXPECT_EQ(NormalizeSinr(-30.0), 0.0);
  EXPECT_EQ(NormalizeSinr(80.0), 1.0);
}

TEST(Observe, Layout) {
  const std::vector<std::optional<double>> avg{15.0, 40.0, -10.0};
  ObservationInputs in;
  in.avg_sinr_db = avg;
  in.serving_index = 1;
  in.throughput_bps = 30e6;
  in.capacity_max_bps = 60e6;
  in.since_handover_s = 45.0;
  in.handover_count = 5;
  const AgentState s = Observe(in);
  EXPECT_EQ(s.dimension(), 10u);
  EXPECT_EQ(StateDimension(3), 10);
  const std::vector<double> flat = s.Flatten();
  const std::vector<double> expected{0.5, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 1.0, 0.25};
  ASSERT_EQ(flat.size(), expected.size());
  for (std::size_t i = 0; i < flat.size(); ++i) EXPECT_DOUBLE_EQ(flat[i], expected[i]) << i;
}

TEST(Observe, DeltaBest) {
  const std::vector<std::optional<double>> avg{5.0, 20.0};
  ObservationInputs in;
  in.avg_sinr_db = avg;
  in.serving_index = 0;
  EXPECT_DOUBLE_EQ(Observe(in).delta_best, 0.3);
  in.serving_index = 1;
  EXPECT_EQ(Observe(in).delta_best, 0.0);
}

TEST(Observe, ColdStartAndBadServing) {
  const std::vector<std::optional<double>> avg{5.0, std::nullopt};
  ObservationInputs in;
  in.avg_sinr_db = avg;
  EXPECT_THROW(Observe(in), ColdStart);
  const std::vector<std::optional<double>> full{5.0, 6.0};
  in.avg_sinr_db = full;
  in.serving_index = 2;
  EXPECT_THROW(Observe(in), ConfigError);
}

TEST(Observe, NormalizationProperty) {
  const testing::CheckResult r = testing::CheckNormalizationBounds(10000, 1);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Reward, Examples) {
  const RewardSpec spec;
  EXPECT_NEAR(Reward(spec, 0.8, 0.6, false), 0.54, 1e-12);
  EXPECT_NEAR(Reward(spec, 0.8, 0.6, true), 0.34, 1e-12);
  EXPECT_EQ(Reward(spec, 0.0, 0.0, false), 0.0);
}

TEST(ActGreedy, Examples) {
  const std::vector<double> q{0.1, 0.9, 0.3};
  EXPECT_EQ(ActGreedy(q, 0), 1);
  const std::vector<double> tie{0.7, 0.2, 0.7};
  EXPECT_EQ(ActGreedy(tie, 2), 2);
  EXPECT_EQ(ActGreedy(tie, 1), 0);
  EXPECT_EQ(ActGreedy(tie, -1), 0);
}

}  // namespace
}  // namespace aeronet
