#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support/paths.h"

#ifdef AERONET_CLI_PATH

namespace aeronet {
namespace {

int RunCli(const std::string& args) {
  const std::string cmd = std::string("AERONET_LOG=off \"") + AERONET_CLI_PATH + "\" " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path WriteScenario(const std::filesystem::path& dir, const std::string& experiment) {
  const auto path = dir / "tiny.json";
  std::ofstream(path) << R"({
    "area": {"x_m": 200, "y_m": 200, "z_max_m": 120},
    "duration_s": 2,
    "gnbs": [{"id": 0, "pos": [20, 20]}, {"id": 1, "pos": [180, 180]}],
    "ues": [{"id": 0, "pos": [60, 60, 50], "interfaces": [0]}],
    "experiment": )" << experiment << "}\n";
  return path;
}

TEST(Cli, RunSucceeds) {
  const auto dir = testing::ScratchDir("cli_run");
  const auto cfg = WriteScenario(dir, R"({"seeds": [1, 2]})");
  EXPECT_EQ(RunCli("run --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "seed_2" / "flows.csv"));
  EXPECT_EQ(RunCli("run --config " + cfg.string() + " --seed 9 --transport tcp --out " +
                   (dir / "out9").string()),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out9" / "seed_9" / "summary.json"));
}

TEST(Cli, HelpIsNotAnError) { EXPECT_EQ(RunCli("--help"), 0); }

TEST(Cli, UsageAndConfigErrorsExitOne) {
  const auto dir = testing::ScratchDir("cli_config");
  EXPECT_EQ(RunCli(""), 1);
  EXPECT_EQ(RunCli("run"), 1);
  EXPECT_EQ(RunCli("fly --config x"), 1);
  EXPECT_EQ(RunCli("run --config /nonexistent.json"), 1);
  const auto bad = WriteScenario(dir, R"({"strategy": "ddpg"})");
  EXPECT_EQ(RunCli("run --config " + bad.string()), 1);
  const auto ok = WriteScenario(dir, "{}");
  EXPECT_EQ(RunCli("run --config " + ok.string() + " --transport sctp"), 1);
  EXPECT_EQ(RunCli("sweep --config " + ok.string() + " --out " + (dir / "o").string()), 1);
}

TEST(Cli, RuntimeFailureExitsTwo) {
  const auto dir = testing::ScratchDir("cli_runtime");
  const auto cfg = WriteScenario(dir, "{}");
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(RunCli("run --config " + cfg.string() + " --out " + (dir / "blocker" / "sub").string()),
            2);
}

}  // namespace
}  // namespace aeronet

#endif  // AERONET_CLI_PATH
