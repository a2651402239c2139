#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "aeronet/error.h"
#include "aeronet/experiment/config.h"
#include "aeronet/experiment/runner.h"
#include "aeronet/experiment/traces.h"
#include "support/paths.h"

namespace aeronet {
namespace {

RunOutput ShortFig6Run() {
  ExperimentConfig config = LoadExperimentConfig(testing::ScenarioPath("fig6_mobility.json"));
  config.duration_s = 60.0;
  return RunOnce(BuildRunScenario(config, 1), MakeSimulationOptions(config, Trigger::kA3));
}

TEST(FormatDouble, FixedPrecision) {
  EXPECT_EQ(FormatDouble(1.23456, 3), "1.235");
  EXPECT_EQ(FormatDouble(-0.0001, 3), "0.000");
  EXPECT_EQ(FormatDouble(2.0, 0), "2");
  EXPECT_EQ(FormatDouble(-2.5, 1), "-2.5");
}

TEST(Traces, HandoverCsvRoundTrip) {
  const RunOutput run = ShortFig6Run();
  ASSERT_FALSE(run.handovers.empty());
  std::stringstream first;
  WriteHandoverCsv(first, run.handovers);
  std::istringstream in(first.str());
  const std::vector<HandoverRecord> back = ReadHandoverCsv(in);
  ASSERT_EQ(back.size(), run.handovers.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].t, run.handovers[i].t);
    EXPECT_EQ(back[i].to, run.handovers[i].to);
    EXPECT_EQ(back[i].pingpong, run.handovers[i].pingpong);
  }
  std::stringstream second;
  WriteHandoverCsv(second, back);
  EXPECT_EQ(second.str(), first.str());
}

TEST(Traces, SummaryIsAPureFunctionOfTheCsvs) {
  const RunOutput run = ShortFig6Run();
  const int packet_bytes = LinkConfig{}.packet_bytes;
  std::stringstream ho_csv, flow_csv;
  WriteHandoverCsv(ho_csv, run.handovers);
  WriteFlowCsv(flow_csv, run.flows);
  std::istringstream ho_in(ho_csv.str()), flow_in(flow_csv.str());
  const auto handovers = ReadHandoverCsv(ho_in);
  const auto flows = ReadFlowCsv(flow_in);

  std::stringstream flow_again;
  WriteFlowCsv(flow_again, flows);
  EXPECT_EQ(flow_again.str(), flow_csv.str());

  std::stringstream direct, reread;
  WriteSummaryCsv(direct, Summarize(run.handovers, run.flows, packet_bytes));
  WriteSummaryCsv(reread, Summarize(handovers, flows, packet_bytes));
  EXPECT_EQ(reread.str(), direct.str());
  std::stringstream engine;
  WriteSummaryCsv(engine, run.summary);
  EXPECT_EQ(engine.str(), direct.str());
}

TEST(Traces, MalformedInputIsASchemaError) {
  std::istringstream bad_header("time,ue\n1,2\n");
  EXPECT_THROW(ReadHandoverCsv(bad_header), SchemaError);
  std::istringstream bad_row(
      "t,ue,interface,from,to,trigger,pingpong_flag\n1.000,0,0,1,x,A3,0\n");
  EXPECT_THROW(ReadHandoverCsv(bad_row), SchemaError);
  std::istringstream short_row(
      "t,flow_id,protocol,path_id,cwnd,srtt_ms,delivered_bytes,lost_packets,queue_drops\n"
      "0.100,0,quic,0\n");
  EXPECT_THROW(ReadFlowCsv(short_row), SchemaError);
}

}  // namespace
}  // namespace aeronet
