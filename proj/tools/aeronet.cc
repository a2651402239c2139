// aeronet: command-line front end for running, training, comparing and
// sweeping scenarios.

#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "aeronet/error.h"
#include "aeronet/experiment/config.h"
#include "aeronet/experiment/runner.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> strategy;
  std::optional<std::string> transport;
  std::optional<int> episodes;
  std::optional<std::string> checkpoint;
  bool gnuplot = false;
};

void AddCommonFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Scenario / experiment JSON file")->required();
  cmd->add_option("--seed", f.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--strategy", f.strategy, "A3 | UCB | DQN");
  cmd->add_option("--transport", f.transport, "udp | tcp | quic | mpquic");
  cmd->add_option("--episodes", f.episodes, "Training episodes");
  cmd->add_option("--checkpoint", f.checkpoint, "DQN checkpoint to write (train) or read");
  cmd->add_flag("--gnuplot", f.gnuplot, "Also write whitespace-separated .dat files");
}

aeronet::ExperimentConfig Resolve(const Flags& f) {
  aeronet::ExperimentConfig c = aeronet::LoadExperimentConfig(f.config);
  if (f.seed) c.seeds = {*f.seed};
  if (f.out) c.out_dir = *f.out;
  if (f.strategy) {
    c.strategy = aeronet::ParseTrigger(*f.strategy);
    c.compare_strategies = {c.strategy};
  }
  if (f.transport) c.transport = aeronet::ParseProtocol(*f.transport);
  if (f.episodes) c.training.episodes = *f.episodes;
  if (f.checkpoint) c.checkpoint = *f.checkpoint;
  c.gnuplot = f.gnuplot;
  aeronet::ValidateExperimentConfig(c);
  return c;
}

void SetLogLevel() {
  const char* env = std::getenv("AERONET_LOG");
  if (!env) {
    spdlog::set_level(spdlog::level::info);
    return;
  }
  spdlog::set_level(spdlog::level::from_str(env));
}

std::string Mbps(double bps) { return aeronet::FormatDouble(bps / 1e6, 3); }

}  // namespace

int main(int argc, char** argv) {
  SetLogLevel();
  CLI::App app{"aeronet: cellular-connected UAV network simulator"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario once per seed");
  CLI::App* train = app.add_subcommand("train", "Train the DQN handover policy offline");
  CLI::App* compare = app.add_subcommand("compare", "Compare handover strategies on shared trajectories");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter axis");
  for (CLI::App* cmd : {run, train, compare, sweep}) AddCommonFlags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto progress = [](const std::string& msg) { spdlog::info("{}", msg); };
  try {
    const aeronet::ExperimentConfig config = Resolve(flags);
    if (run->parsed()) {
      for (const auto& r : aeronet::RunCommand(config, progress)) {
        spdlog::info("seed {}: throughput {} Mb/s per UE, loss {}, handovers {}, ping-pongs {}",
                     r.seed, Mbps(r.summary.mean_throughput_bps),
                     aeronet::FormatDouble(r.summary.mean_loss_rate, 4),
                     r.summary.total_handovers, r.summary.total_pingpongs);
      }
    } else if (train->parsed()) {
      const auto out = aeronet::TrainCommand(config, progress);
      spdlog::info("checkpoint written to {}", out.checkpoint_path.string());
    } else if (compare->parsed()) {
      for (const auto& row : aeronet::CompareCommand(config, progress).rows) {
        spdlog::info("{}: throughput {} +- {} Mb/s, handovers {} +- {}",
                     aeronet::TriggerName(row.strategy), Mbps(row.throughput_bps.mean),
                     Mbps(row.throughput_bps.std),
                     aeronet::FormatDouble(row.handovers.mean, 2),
                     aeronet::FormatDouble(row.handovers.std, 2));
      }
    } else if (sweep->parsed()) {
      for (const auto& p : aeronet::SweepCommand(config, progress)) {
        spdlog::info("{} = {}: throughput {} Mb/s per UE, loss {}, handovers {}",
                     aeronet::SweepAxisName(config.sweep->axis),
                     aeronet::FormatDouble(p.value, 3), Mbps(p.throughput_bps.mean),
                     aeronet::FormatDouble(p.loss_rate.mean, 4),
                     aeronet::FormatDouble(p.handovers.mean, 2));
      }
    }
  } catch (const aeronet::ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("runtime failure: {}", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
