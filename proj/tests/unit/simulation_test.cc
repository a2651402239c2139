#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include "aeronet/engine/simulation.h"
#include "aeronet/error.h"
#include "aeronet/experiment/config.h"
#include "aeronet/experiment/runner.h"
#include "aeronet/experiment/traces.h"
#include "support/paths.h"

namespace aeronet {
namespace {

ExperimentConfig Fig6(double duration_s) {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig6_mobility.json"));
  config.duration_s = duration_s;
  return config;
}

std::string FlowCsv(const RunOutput& run) {
  std::stringstream s;
  WriteFlowCsv(s, run.flows);
  WriteHandoverCsv(s, run.handovers);
  WriteSinrCsv(s, run.sinr);
  WritePositionCsv(s, run.positions);
  return s.str();
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Simulation, SameSeedSameTraces) {
  const ExperimentConfig config = Fig6(60.0);
  const auto options = MakeSimulationOptions(config, Trigger::kA3);
  const RunOutput a = RunOnce(BuildRunScenario(config, 3), options);
  const RunOutput b = RunOnce(BuildRunScenario(config, 3), options);
  EXPECT_EQ(FlowCsv(a), FlowCsv(b));
  const RunOutput c = RunOnce(BuildRunScenario(config, 4), options);
  EXPECT_NE(FlowCsv(a), FlowCsv(c));
}

TEST(Simulation, TrajectorySeedIsolatesMobility) {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig9_compare.json"));
  config.duration_s = 30.0;
  const auto options = MakeSimulationOptions(config, Trigger::kA3);
  const RunOutput a = RunOnce(BuildRunScenario(config, 1, 77), options);
  const RunOutput b = RunOnce(BuildRunScenario(config, 2, 77), options);
  const RunOutput c = RunOnce(BuildRunScenario(config, 1, 78), options);
  EXPECT_EQ(a.trajectory_hashes, b.trajectory_hashes);
  EXPECT_NE(a.trajectory_hashes, c.trajectory_hashes);
  EXPECT_NE(FlowCsv(a), FlowCsv(b));
}

TEST(Simulation, RunUntilIsResumable) {
  const ExperimentConfig config = Fig6(20.0);
  const auto options = MakeSimulationOptions(config, Trigger::kA3);
  Simulation whole(BuildRunScenario(config, 1), options);
  whole.Run();
  Simulation pieces(BuildRunScenario(config, 1), options);
  for (Tick t = 1000; t <= pieces.end(); t += 1000) pieces.RunUntil(t);
  EXPECT_EQ(pieces.now(), whole.now());
  ASSERT_EQ(pieces.flow_rows().size(), whole.flow_rows().size());
  EXPECT_EQ(pieces.flow_rows().back().delivered_bytes, whole.flow_rows().back().delivered_bytes);
  EXPECT_EQ(pieces.handovers().size(), whole.handovers().size());
}

TEST(Simulation, ObservationsStayNormalised) {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig9_compare.json"));
  config.duration_s = 60.0;
  SimulationOptions options = MakeSimulationOptions(config, Trigger::kA3);
  options.external_decisions = true;
  Simulation sim(BuildRunScenario(config, 5), options);
  RngStream rng(5, "random-policy");
  for (Tick t = 1000; t <= sim.end(); t += 1000) {
    sim.RunUntil(t);
    const DecisionContext ctx = sim.Context(0, 1.0);
    const std::vector<double> s = ObserveInterface(ctx, config.observation).Flatten();
    for (double v : s) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    const auto& cands = sim.manager(0).candidates();
    const NodeId target = cands[rng.UniformIndex(cands.size())];
    if (target != sim.manager(0).serving()) sim.Handover(0, target, Trigger::kDqn);
  }
  EXPECT_GT(sim.manager(0).handover_count(), 0);
}

TEST(Simulation, HandoverDuringInterruptionIsRefused) {
  const ExperimentConfig config = Fig6(5.0);
  SimulationOptions options = MakeSimulationOptions(config, Trigger::kA3);
  options.external_decisions = true;
  Simulation sim(BuildRunScenario(config, 1), options);
  sim.RunUntil(1000);
  const NodeId serving = sim.manager(0).serving();
  const NodeId other = serving == 0 ? 1 : 0;
  ASSERT_TRUE(sim.Handover(0, other, Trigger::kDqn).has_value());
  EXPECT_FALSE(sim.Handover(0, serving, Trigger::kDqn).has_value());
  EXPECT_THROW(sim.Handover(0, 99, Trigger::kDqn), InvalidTarget);
}

TEST(Commands, SinglePointSweepEqualsRun) {
  ExperimentConfig config = Fig6(60.0);
  config.seeds = {1, 2};
  config.out_dir = testing::ScratchDir("sweep_vs_run") / "run";
  const auto runs = RunCommand(config);
  ExperimentConfig sweep = config;
  sweep.out_dir = config.out_dir.parent_path() / "sweep";
  sweep.sweep = SweepSpec{SweepAxis::kA3Offset, {config.handover.a3.offset_db}};
  const auto points = SweepCommand(sweep);
  ASSERT_EQ(points.size(), 1u);
  ASSERT_EQ(points[0].per_seed.size(), runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::stringstream a, b;
    WriteSummaryCsv(a, runs[i].summary);
    WriteSummaryCsv(b, points[0].per_seed[i]);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(Commands, RunWritesEveryTraceFile) {
  ExperimentConfig config = Fig6(10.0);
  config.out_dir = testing::ScratchDir("run_files");
  RunCommand(config);
  for (const char* f : {"handovers.csv", "flows.csv", "sinr.csv", "positions.csv",
                        "summary.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(config.out_dir / "seed_1" / f)) << f;
  }
  EXPECT_TRUE(std::filesystem::exists(config.out_dir / "aggregate.csv"));
}

TEST(Commands, CompareAgainstItselfGivesIdenticalRows) {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig9_compare.json"));
  config.duration_s = 30.0;
  config.seeds = {1, 2};
  config.trajectory_seeds = {11};
  config.compare_strategies = {Trigger::kA3, Trigger::kA3};
  config.out_dir = testing::ScratchDir("compare_self");
  const CompareResult r = CompareCommand(config);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].throughput_bps.mean, r.rows[1].throughput_bps.mean);
  EXPECT_EQ(r.rows[0].throughput_bps.std, r.rows[1].throughput_bps.std);
  EXPECT_EQ(r.rows[0].handovers.mean, r.rows[1].handovers.mean);
  EXPECT_EQ(r.rows[0].runs, 2);
}

TEST(Commands, LargerA3OffsetNeverAddsHandovers) {
  ExperimentConfig config = Fig6(240.0);
  config.seeds = {1, 2};
  config.out_dir = testing::ScratchDir("offset_sweep");
  config.sweep = SweepSpec{SweepAxis::kA3Offset, {0.0, 1.0, 3.0, 6.0}};
  const auto points = SweepCommand(config);
  ASSERT_EQ(points.size(), 4u);
  for (std::size_t i = 1; i < points.size(); ++i) {
    EXPECT_LE(points[i].handovers.mean, points[i - 1].handovers.mean) << points[i].value;
  }
  EXPECT_TRUE(std::filesystem::exists(config.out_dir / "sweep.csv"));
}

TEST(Commands, LongerTimeToTriggerNeverAddsHandovers) {
  double previous = 1e9;
  for (double ttt : {0.0, 0.16, 0.48, 1.0}) {
    ExperimentConfig config = Fig6(240.0);
    config.handover.a3.time_to_trigger_s = ttt;
    const RunOutput run =
        RunOnce(BuildRunScenario(config, 1), MakeSimulationOptions(config, Trigger::kA3));
    EXPECT_LE(run.summary.total_handovers, previous) << ttt;
    previous = run.summary.total_handovers;
  }
}

TEST(Commands, SweepFilesAreReproducible) {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig7_scalability.json"));
  config.sweep->values = {3, 9};
  config.seeds = {1};
  config.out_dir = testing::ScratchDir("sweep_repro") / "a";
  SweepCommand(config);
  const std::string first = Slurp(config.out_dir / "sweep.csv");
  config.out_dir = config.out_dir.parent_path() / "b";
  SweepCommand(config);
  EXPECT_EQ(Slurp(config.out_dir / "sweep.csv"), first);
  EXPECT_FALSE(first.empty());
}

}  // namespace
}  // namespace aeronet
