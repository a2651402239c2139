#include "aeronet/rl/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "aeronet/error.h"

namespace aeronet {
namespace {

constexpr char kMagic[8] = {'A', 'E', 'R', 'O', 'N', 'E', 'T', 'Q'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void PutU32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t GetU32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

nlohmann::json Header(const Checkpoint& c) {
  const NetworkShape& s = c.network.shape();
  const DqnConfig& d = c.dqn;
  return {
      {"shape", {{"inputs", s.inputs}, {"hidden", s.hidden}, {"actions", s.actions}}},
      {"param_count", c.network.param_count()},
      {"observation",
       {{"sinr_min_db", c.observation.sinr_min_db},
        {"sinr_range_db", c.observation.sinr_range_db},
        {"tau_scale_s", c.observation.tau_scale_s},
        {"handover_scale", c.observation.handover_scale}}},
      {"reward",
       {{"w1", c.reward.w1}, {"w2", c.reward.w2}, {"w3", c.reward.w3},
        {"gamma", c.reward.gamma}}},
      {"dqn",
       {{"gamma", d.gamma},
        {"n_step", d.n_step},
        {"learning_rate", d.learning_rate},
        {"batch_size", d.batch_size},
        {"buffer_capacity", d.buffer_capacity},
        {"target_sync_steps", d.target_sync_steps},
        {"epsilon_start", d.epsilon_start},
        {"epsilon_end", d.epsilon_end},
        {"epsilon_decay_steps", d.epsilon_decay_steps},
        {"grad_clip_norm", d.grad_clip_norm},
        {"warmup_transitions", d.warmup_transitions},
        {"train_every", d.train_every},
        {"optimizer", d.optimizer == OptimizerKind::kAdam ? "adam" : "momentum"},
        {"momentum", d.momentum},
        {"seed", d.seed}}},
      {"candidate_gnbs", c.candidate_gnbs},
      {"interface_group", c.interface_group},
      {"episodes_trained", c.episodes_trained},
  };
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& c) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::string header = Header(c).dump();
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    out.write(kMagic, sizeof kMagic);
    PutU32(out, kCheckpointVersion);
    PutU32(out, static_cast<std::uint32_t>(header.size()));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    const auto params = c.network.params();
    out.write(reinterpret_cast<const char*>(params.data()),
              static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!out) throw Error("failed writing checkpoint " + path.string());
  }
  std::ofstream side(path.string() + ".txt", std::ios::trunc);
  side << "aeronet q-network checkpoint\n"
       << "format_version: " << kCheckpointVersion << "\n"
       << Header(c).dump(2) << "\n";
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ConfigError(path.string() + ": not an aeronet checkpoint");
  }
  const std::uint32_t version = GetU32(in);
  if (version != kCheckpointVersion) {
    throw ConfigError(path.string() + ": unsupported checkpoint version " +
                      std::to_string(version));
  }
  const std::uint32_t header_len = GetU32(in);
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) throw ConfigError(path.string() + ": truncated header");

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": bad header: " + e.what());
  }
  try {
    Checkpoint c;
    NetworkShape shape{h["shape"]["inputs"].get<int>(),
                       h["shape"]["hidden"].get<std::vector<int>>(),
                       h["shape"]["actions"].get<int>()};
    c.network = QNetwork(shape);
    if (c.network.param_count() != h["param_count"].get<std::size_t>()) {
      throw ConfigError(path.string() + ": parameter count does not match shape");
    }
    auto params = c.network.params();
    in.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!in) throw ConfigError(path.string() + ": truncated parameters");

    const auto& o = h["observation"];
    c.observation = {o["sinr_min_db"], o["sinr_range_db"], o["tau_scale_s"],
                     o["handover_scale"]};
    const auto& r = h["reward"];
    c.reward = {r["w1"], r["w2"], r["w3"], r["gamma"]};
    const auto& d = h["dqn"];
    c.dqn.gamma = d["gamma"];
    c.dqn.n_step = d["n_step"];
    c.dqn.learning_rate = d["learning_rate"];
    c.dqn.batch_size = d["batch_size"];
    c.dqn.buffer_capacity = d["buffer_capacity"];
    c.dqn.target_sync_steps = d["target_sync_steps"];
    c.dqn.epsilon_start = d["epsilon_start"];
    c.dqn.epsilon_end = d["epsilon_end"];
    c.dqn.epsilon_decay_steps = d["epsilon_decay_steps"];
    c.dqn.hidden = shape.hidden;
    c.dqn.grad_clip_norm = d["grad_clip_norm"];
    c.dqn.warmup_transitions = d["warmup_transitions"];
    c.dqn.train_every = d["train_every"];
    c.dqn.optimizer = d["optimizer"] == "momentum" ? OptimizerKind::kMomentum
                                                   : OptimizerKind::kAdam;
    c.dqn.momentum = d["momentum"];
    c.dqn.seed = d["seed"];
    c.candidate_gnbs = h["candidate_gnbs"].get<std::vector<std::uint32_t>>();
    c.interface_group = h["interface_group"];
    c.episodes_trained = h["episodes_trained"];
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": bad header: " + e.what());
  }
}

}  // namespace aeronet
