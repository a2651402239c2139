#include "aeronet/experiment/runner.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aeronet/error.h"
#include "aeronet/experiment/environment.h"

namespace aeronet {
namespace {

using nlohmann::json;

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Whitespace-separated copy of a CSV file with the header as a comment.
void WriteGnuplotCopy(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::filesystem::path dat = csv;
  dat.replace_extension(".dat");
  std::ofstream out = OpenOut(dat);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    out << (header ? "# " : "") << line << '\n';
    header = false;
  }
}

void WriteCsvFile(const std::filesystem::path& path, bool gnuplot,
                  const std::function<void(std::ostream&)>& body) {
  {
    std::ofstream out = OpenOut(path);
    body(out);
  }
  if (gnuplot) WriteGnuplotCopy(path);
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json SummaryJson(const RunOutput& run, const ExperimentConfig& config) {
  json ues = json::array();
  for (const UeMetrics& m : run.summary.ues) {
    ues.push_back({{"ue", m.ue},
                   {"throughput_bps", m.throughput_bps},
                   {"loss_rate", m.loss_rate},
                   {"handovers", m.handovers},
                   {"pingpongs", m.pingpongs},
                   {"delivered_bytes", m.delivered_bytes},
                   {"lost_packets", m.lost_packets},
                   {"queue_drops", m.queue_drops}});
  }
  json events = json::object();
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    events[std::string(EventKindName(static_cast<EventKind>(k)))] = run.events.by_kind[k];
  }
  json hashes = json::array();
  for (std::uint64_t h : run.trajectory_hashes) hashes.push_back(Hex(h));
  json out = {
      {"scenario", config.scenario_path.filename().string()},
      {"seed", run.seed},
      {"strategy", std::string(TriggerName(run.strategy))},
      {"transport", std::string(ProtocolName(config.transport))},
      {"duration_s", run.summary.duration_s},
      {"mean_throughput_bps", run.summary.mean_throughput_bps},
      {"mean_loss_rate", run.summary.mean_loss_rate},
      {"mean_handovers", run.summary.mean_handovers},
      {"mean_pingpongs", run.summary.mean_pingpongs},
      {"total_handovers", run.summary.total_handovers},
      {"total_pingpongs", run.summary.total_pingpongs},
      {"events", events},
      {"trajectory_hashes", hashes},
      {"ues", ues},
  };
  if (run.trajectory_seed) out["trajectory_seed"] = *run.trajectory_seed;
  return out;
}

std::vector<std::optional<std::uint64_t>> TrajectorySeeds(const ExperimentConfig& config) {
  std::vector<std::optional<std::uint64_t>> out;
  for (std::uint64_t t : config.trajectory_seeds) out.push_back(t);
  if (out.empty()) out.push_back(std::nullopt);
  return out;
}

std::shared_ptr<const QNetwork> PolicyFor(const ExperimentConfig& config, Trigger strategy,
                                          ExperimentConfig* adjusted) {
  if (strategy != Trigger::kDqn) return nullptr;
  Checkpoint c = LoadPolicy(config);
  if (adjusted) adjusted->observation = c.observation;
  return std::make_shared<const QNetwork>(std::move(c.network));
}

void Report(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

}  // namespace

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

Scenario BuildRunScenario(const ExperimentConfig& config, std::uint64_t seed,
                          std::optional<std::uint64_t> trajectory_seed) {
  json doc = config.scenario_json;
  doc["seed"] = seed;
  if (trajectory_seed) doc["trajectory_seed"] = *trajectory_seed;
  Scenario s = BuildScenario(doc, config.scenario_path.parent_path());
  if (config.duration_s) s.duration_s = *config.duration_s;
  return s;
}

SimulationOptions MakeSimulationOptions(const ExperimentConfig& config, Trigger strategy,
                                        std::shared_ptr<const QNetwork> policy) {
  SimulationOptions o;
  o.channel = config.channel;
  o.link = config.link;
  o.handover = config.handover;
  o.strategy = strategy;
  o.policy = std::move(policy);
  o.observation = config.observation;
  o.transport = config.transport;
  o.cbr_rate_bps = config.cbr_rate_bps;
  return o;
}

Checkpoint LoadPolicy(const ExperimentConfig& config) {
  if (!config.checkpoint) throw ConfigError("the DQN strategy needs --checkpoint");
  Checkpoint c = LoadCheckpoint(*config.checkpoint);
  const Scenario s = BuildRunScenario(config, config.seeds.empty() ? 1 : config.seeds[0]);
  if (!s.ues.empty() && !s.ues[0].interfaces.empty() &&
      s.ues[0].interfaces[0].candidate_gnbs != c.candidate_gnbs) {
    throw ConfigError("checkpoint was trained for a different set of gNBs");
  }
  return c;
}

RunOutput RunOnce(const Scenario& scenario, const SimulationOptions& options) {
  Simulation sim(scenario, options);
  RunOutput out;
  out.seed = scenario.seed;
  out.trajectory_seed = scenario.trajectory_seed;
  out.strategy = options.strategy;
  out.events = sim.Run();
  for (std::size_t u = 0; u < scenario.ues.size(); ++u) {
    out.trajectory_hashes.push_back(sim.trajectory_hash(u));
  }
  out.handovers = sim.handovers();
  out.flows = sim.flow_rows();
  out.sinr = sim.sinr_rows();
  out.positions = sim.position_rows();
  out.summary = Summarize(out.handovers, out.flows, options.link.packet_bytes);
  return out;
}

void WriteRunOutputs(const RunOutput& run, const ExperimentConfig& config,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const bool gp = config.gnuplot;
  WriteCsvFile(dir / "handovers.csv", gp, [&](std::ostream& o) { WriteHandoverCsv(o, run.handovers); });
  WriteCsvFile(dir / "flows.csv", gp, [&](std::ostream& o) { WriteFlowCsv(o, run.flows); });
  WriteCsvFile(dir / "sinr.csv", gp, [&](std::ostream& o) { WriteSinrCsv(o, run.sinr); });
  WriteCsvFile(dir / "positions.csv", gp, [&](std::ostream& o) { WritePositionCsv(o, run.positions); });
  WriteCsvFile(dir / "summary.csv", gp, [&](std::ostream& o) { WriteSummaryCsv(o, run.summary); });
  std::ofstream js = OpenOut(dir / "summary.json");
  js << SummaryJson(run, config).dump(2) << '\n';
}

std::vector<RunOutput> RunCommand(const ExperimentConfig& in, const ProgressFn& progress) {
  ExperimentConfig config = in;
  ValidateExperimentConfig(config);
  auto policy = PolicyFor(config, config.strategy, &config);
  std::vector<RunOutput> runs;
  for (std::uint64_t seed : config.seeds) {
    Report(progress, "run seed " + std::to_string(seed));
    const Scenario s = BuildRunScenario(config, seed);
    RunOutput run = RunOnce(s, MakeSimulationOptions(config, config.strategy, policy));
    WriteRunOutputs(run, config, config.out_dir / ("seed_" + std::to_string(seed)));
    runs.push_back(std::move(run));
  }
  std::vector<double> thr, loss, ho, pp;
  for (const RunOutput& r : runs) {
    thr.push_back(r.summary.mean_throughput_bps);
    loss.push_back(r.summary.mean_loss_rate);
    ho.push_back(r.summary.mean_handovers);
    pp.push_back(r.summary.mean_pingpongs);
  }
  WriteCsvFile(config.out_dir / "aggregate.csv", config.gnuplot, [&](std::ostream& o) {
    o << "metric,mean,std,runs\n";
    const std::pair<const char*, std::vector<double>*> metrics[] = {
        {"throughput_bps", &thr}, {"loss_rate", &loss}, {"handovers", &ho}, {"pingpongs", &pp}};
    for (const auto& [name, values] : metrics) {
      const MeanStd m = ComputeMeanStd(*values);
      o << name << ',' << FormatDouble(m.mean, 6) << ',' << FormatDouble(m.std, 6) << ','
        << values->size() << '\n';
    }
  });
  return runs;
}

CompareResult CompareCommand(const ExperimentConfig& in, const ProgressFn& progress) {
  ExperimentConfig config = in;
  ValidateExperimentConfig(config);
  CompareResult result;
  // trajectory seed (or scenario default) -> first observed hashes
  std::map<std::optional<std::uint64_t>, std::vector<std::uint64_t>> reference;

  for (Trigger strategy : config.compare_strategies) {
    ExperimentConfig local = config;
    auto policy = PolicyFor(config, strategy, &local);
    std::vector<double> thr, ho, pp;
    for (auto traj : TrajectorySeeds(config)) {
      for (std::uint64_t seed : config.seeds) {
        Report(progress, std::string(TriggerName(strategy)) + " trajectory " +
                             (traj ? std::to_string(*traj) : "default") + " seed " +
                             std::to_string(seed));
        const Scenario s = BuildRunScenario(config, seed, traj);
        SimulationOptions opt = MakeSimulationOptions(local, strategy, policy);
        RunOutput run = RunOnce(s, opt);
        auto [it, inserted] = reference.try_emplace(traj, run.trajectory_hashes);
        if (!inserted && it->second != run.trajectory_hashes) {
          throw TrajectoryMismatch("strategy " + std::string(TriggerName(strategy)) +
                                   " flew a different trajectory than the reference run");
        }
        thr.push_back(run.summary.mean_throughput_bps);
        ho.push_back(run.summary.mean_handovers);
        pp.push_back(run.summary.mean_pingpongs);
        run.sinr.clear();
        run.positions.clear();
        result.runs.push_back(std::move(run));
      }
    }
    CompareRow row;
    row.strategy = strategy;
    row.throughput_bps = ComputeMeanStd(thr);
    row.handovers = ComputeMeanStd(ho);
    row.pingpongs = ComputeMeanStd(pp);
    row.runs = static_cast<int>(thr.size());
    result.rows.push_back(row);
  }

  std::filesystem::create_directories(config.out_dir);
  WriteCsvFile(config.out_dir / "compare_runs.csv", config.gnuplot, [&](std::ostream& o) {
    o << "strategy,trajectory_seed,seed,trajectory_hash,mean_throughput_bps,handovers,pingpongs\n";
    for (const RunOutput& r : result.runs) {
      o << TriggerName(r.strategy) << ',' << (r.trajectory_seed ? std::to_string(*r.trajectory_seed) : "")
        << ',' << r.seed << ',' << (r.trajectory_hashes.empty() ? "" : Hex(r.trajectory_hashes[0]))
        << ',' << FormatDouble(r.summary.mean_throughput_bps, 3) << ','
        << FormatDouble(r.summary.mean_handovers, 3) << ','
        << FormatDouble(r.summary.mean_pingpongs, 3) << '\n';
    }
  });
  WriteCsvFile(config.out_dir / "compare.csv", config.gnuplot, [&](std::ostream& o) {
    o << "strategy,throughput_mean_bps,throughput_std_bps,handovers_mean,handovers_std,"
         "pingpongs_mean,pingpongs_std,runs\n";
    for (const CompareRow& r : result.rows) {
      o << TriggerName(r.strategy) << ',' << FormatDouble(r.throughput_bps.mean, 3) << ','
        << FormatDouble(r.throughput_bps.std, 3) << ',' << FormatDouble(r.handovers.mean, 3)
        << ',' << FormatDouble(r.handovers.std, 3) << ',' << FormatDouble(r.pingpongs.mean, 3)
        << ',' << FormatDouble(r.pingpongs.std, 3) << ',' << r.runs << '\n';
    }
  });
  return result;
}

std::vector<SweepPoint> SweepCommand(const ExperimentConfig& in, const ProgressFn& progress) {
  ExperimentConfig config = in;
  ValidateExperimentConfig(config);
  if (!config.sweep) throw ConfigError("sweep needs experiment.sweep {axis, values}");
  const SweepSpec sweep = *config.sweep;

  std::vector<SweepPoint> points;
  for (double value : sweep.values) {
    ExperimentConfig point = config;
    std::shared_ptr<const QNetwork> policy;
    switch (sweep.axis) {
      case SweepAxis::kUeCount:
        if (value < 1 || value != std::floor(value)) {
          throw ConfigError("ue_count values must be positive integers");
        }
        point.scenario_json["random_ues"] = static_cast<std::uint64_t>(value);
        break;
      case SweepAxis::kA3Offset:
        point.handover.a3.offset_db = value;
        break;
      case SweepAxis::kRewardWeights: {
        // The axis value is the handover penalty w3; each point retrains.
        point.reward.w3 = value;
        point.strategy = Trigger::kDqn;
        point.out_dir = config.out_dir / ("w3_" + FormatDouble(value, 3));
        point.checkpoint = point.out_dir / "dqn.ckpt";
        TrainCommand(point, progress);
        break;
      }
    }
    if (point.strategy == Trigger::kDqn) policy = PolicyFor(point, Trigger::kDqn, &point);

    SweepPoint sp;
    sp.value = value;
    std::vector<double> thr, loss, ho, pp;
    for (std::uint64_t seed : config.seeds) {
      Report(progress, SweepAxisName(sweep.axis) + "=" + FormatDouble(value, 3) + " seed " +
                           std::to_string(seed));
      const Scenario s = BuildRunScenario(point, seed);
      SimulationOptions opt = MakeSimulationOptions(point, point.strategy, policy);
      opt.record_traces = true;
      const RunOutput run = RunOnce(s, opt);
      sp.per_seed.push_back(run.summary);
      thr.push_back(run.summary.mean_throughput_bps);
      loss.push_back(run.summary.mean_loss_rate);
      ho.push_back(run.summary.mean_handovers);
      pp.push_back(run.summary.mean_pingpongs);
    }
    sp.throughput_bps = ComputeMeanStd(thr);
    sp.loss_rate = ComputeMeanStd(loss);
    sp.handovers = ComputeMeanStd(ho);
    sp.pingpongs = ComputeMeanStd(pp);
    points.push_back(std::move(sp));
  }

  std::filesystem::create_directories(config.out_dir);
  const std::string axis = SweepAxisName(sweep.axis);
  WriteCsvFile(config.out_dir / "sweep.csv", config.gnuplot, [&](std::ostream& o) {
    o << "axis,value,seed,mean_throughput_bps,mean_loss_rate,mean_handovers,mean_pingpongs\n";
    for (const SweepPoint& p : points) {
      for (std::size_t i = 0; i < p.per_seed.size(); ++i) {
        const RunSummary& s = p.per_seed[i];
        o << axis << ',' << FormatDouble(p.value, 3) << ',' << config.seeds[i] << ','
          << FormatDouble(s.mean_throughput_bps, 3) << ',' << FormatDouble(s.mean_loss_rate, 6)
          << ',' << FormatDouble(s.mean_handovers, 3) << ','
          << FormatDouble(s.mean_pingpongs, 3) << '\n';
      }
    }
  });
  WriteCsvFile(config.out_dir / "sweep_summary.csv", config.gnuplot, [&](std::ostream& o) {
    o << "value,throughput_mean_bps,throughput_std_bps,loss_mean,loss_std,handovers_mean,"
         "handovers_std,pingpongs_mean\n";
    for (const SweepPoint& p : points) {
      o << FormatDouble(p.value, 3) << ',' << FormatDouble(p.throughput_bps.mean, 3) << ','
        << FormatDouble(p.throughput_bps.std, 3) << ',' << FormatDouble(p.loss_rate.mean, 6)
        << ',' << FormatDouble(p.loss_rate.std, 6) << ',' << FormatDouble(p.handovers.mean, 3)
        << ',' << FormatDouble(p.handovers.std, 3) << ',' << FormatDouble(p.pingpongs.mean, 3)
        << '\n';
    }
  });
  return points;
}

TrainOutput TrainCommand(const ExperimentConfig& in, const ProgressFn& progress) {
  ExperimentConfig config = in;
  ValidateExperimentConfig(config);
  const Scenario base = BuildRunScenario(config, config.seeds[0]);

  HandoverEnvironmentConfig env_config;
  env_config.simulation = MakeSimulationOptions(config, Trigger::kDqn);
  env_config.reward = config.reward;
  env_config.observation = config.observation;
  env_config.episode_s = config.training.episode_s;
  env_config.seed = config.training.dqn.seed;
  HandoverEnvironment env(base, env_config);

  DqnConfig dqn = config.training.dqn;
  dqn.gamma = config.reward.gamma;
  TrainResult trained = TrainDqn(env, dqn, config.training.episodes, [&](const EpisodeLog& e) {
    if (progress && (e.episode % 10 == 0 || e.episode + 1 == config.training.episodes)) {
      progress("episode " + std::to_string(e.episode) + " return " +
               FormatDouble(e.episode_return, 3) + " eps " + FormatDouble(e.epsilon, 3) +
               " loss " + FormatDouble(e.loss_mean, 5) + " handovers " +
               std::to_string(e.handovers));
    }
  });

  TrainOutput out;
  out.checkpoint.network = std::move(trained.network);
  out.checkpoint.observation = config.observation;
  out.checkpoint.reward = config.reward;
  out.checkpoint.dqn = dqn;
  out.checkpoint.candidate_gnbs = env.candidates();
  out.checkpoint.interface_group = base.ues[0].interfaces[0].interface_group;
  out.checkpoint.episodes_trained = config.training.episodes;
  out.curve = std::move(trained.curve);
  out.checkpoint_path = config.checkpoint.value_or(config.out_dir / "dqn.ckpt");

  std::filesystem::create_directories(config.out_dir);
  SaveCheckpoint(out.checkpoint_path, out.checkpoint);
  WriteCsvFile(config.out_dir / "learning_curve.csv", config.gnuplot,
               [&](std::ostream& o) { WriteLearningCurveCsv(o, out.curve); });
  return out;
}

}  // namespace aeronet
