#include "aeronet/experiment/config.h"

#include <fstream>

#include "aeronet/error.h"
#include "aeronet/topology/scenario.h"

namespace aeronet {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_, "expected an object");
  }

  std::string Path(const char* key) const { return path_ + "." + key; }
  bool Has(const char* key) const { return obj_.contains(key); }

  double Number(const char* key, double fallback) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return fallback;
    if (!it->is_number()) throw SchemaError(Path(key), "expected a number");
    return it->get<double>();
  }
  int Int(const char* key, int fallback) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return fallback;
    if (!it->is_number_integer()) throw SchemaError(Path(key), "expected an integer");
    return it->get<int>();
  }
  bool Bool(const char* key, bool fallback) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return fallback;
    if (!it->is_boolean()) throw SchemaError(Path(key), "expected true or false");
    return it->get<bool>();
  }
  std::optional<std::string> String(const char* key) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return std::nullopt;
    if (!it->is_string()) throw SchemaError(Path(key), "expected a string");
    return it->get<std::string>();
  }
  std::vector<std::uint64_t> Seeds(const char* key) const {
    std::vector<std::uint64_t> out;
    auto it = obj_.find(key);
    if (it == obj_.end()) return out;
    if (!it->is_array()) throw SchemaError(Path(key), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& v = (*it)[i];
      if (!v.is_number_unsigned()) {
        throw SchemaError(Path(key) + "[" + std::to_string(i) + "]",
                          "expected a non-negative integer");
      }
      out.push_back(v.get<std::uint64_t>());
    }
    return out;
  }
  std::vector<double> Numbers(const char* key) const {
    std::vector<double> out;
    auto it = obj_.find(key);
    if (it == obj_.end()) return out;
    if (!it->is_array()) throw SchemaError(Path(key), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) {
        throw SchemaError(Path(key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      out.push_back((*it)[i].get<double>());
    }
    return out;
  }
  std::optional<Reader> Child(const char* key) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return std::nullopt;
    return Reader(*it, Path(key));
  }

 private:
  const json& obj_;
  std::string path_;
};

template <typename F>
auto Convert(const std::string& path, F f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

SweepAxis ParseSweepAxis(const std::string& name) {
  if (name == "ue_count") return SweepAxis::kUeCount;
  if (name == "a3_offset") return SweepAxis::kA3Offset;
  if (name == "reward_weights") return SweepAxis::kRewardWeights;
  throw ConfigError("unknown sweep axis '" + name +
                    "' (ue_count | a3_offset | reward_weights)");
}

std::string SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kUeCount: return "ue_count";
    case SweepAxis::kA3Offset: return "a3_offset";
    case SweepAxis::kRewardWeights: return "reward_weights";
  }
  return "?";
}

ExperimentConfig ParseExperimentConfig(const json& doc, const std::filesystem::path& path) {
  ExperimentConfig c;
  c.scenario_path = path;
  c.scenario_json = doc;
  if (!doc.is_object()) throw SchemaError("$", "scenario must be a JSON object");
  if (auto it = doc.find("seed"); it != doc.end() && it->is_number_unsigned()) {
    c.seeds = {it->get<std::uint64_t>()};
  } else {
    c.seeds = {1};
  }
  if (!doc.contains("experiment")) return c;

  const Reader e(doc["experiment"], "experiment");
  if (auto s = e.String("strategy")) {
    c.strategy = Convert(e.Path("strategy"), [&] { return ParseTrigger(*s); });
  }
  if (auto s = e.String("transport")) {
    c.transport = Convert(e.Path("transport"), [&] { return ParseProtocol(*s); });
  }
  c.cbr_rate_bps = e.Number("cbr_rate_mbps", 0.0) * 1e6;
  if (e.Has("seeds")) c.seeds = e.Seeds("seeds");
  c.trajectory_seeds = e.Seeds("trajectory_seeds");
  if (auto s = e.String("checkpoint")) {
    std::filesystem::path p = *s;
    c.checkpoint = p.is_relative() ? path.parent_path() / p : p;
  }
  if (e.Has("duration_s")) c.duration_s = e.Number("duration_s", 0.0);

  if (auto a3 = e.Child("a3")) {
    c.handover.a3.offset_db = a3->Number("offset_db", c.handover.a3.offset_db);
    c.handover.a3.time_to_trigger_s =
        a3->Number("ttt_ms", c.handover.a3.time_to_trigger_s * 1e3) / 1e3;
  }
  if (auto h = e.Child("handover")) {
    c.handover.window_len = h->Int("window_len", c.handover.window_len);
    c.handover.decision_epoch_s = h->Number("epoch_s", c.handover.decision_epoch_s);
    c.handover.pingpong_window_s = h->Number("pingpong_window_s", c.handover.pingpong_window_s);
    c.handover.ucb_c = h->Number("ucb_c", c.handover.ucb_c);
  }
  if (auto ch = e.Child("channel")) {
    c.channel.sigma_los_db = ch->Number("sigma_los_db", c.channel.sigma_los_db);
    c.channel.sigma_nlos_db = ch->Number("sigma_nlos_db", c.channel.sigma_nlos_db);
    c.channel.decorrelation_m = ch->Number("decorrelation_m", c.channel.decorrelation_m);
    c.channel.los_hold_m = ch->Number("los_hold_m", c.channel.los_hold_m);
    c.channel.jitter_db = ch->Number("jitter_db", c.channel.jitter_db);
    c.channel.shadowing = ch->Bool("shadowing", c.channel.shadowing);
  }
  if (auto l = e.Child("link")) {
    c.link.packet_bytes = l->Int("packet_bytes", c.link.packet_bytes);
    c.link.core_latency_s = l->Number("core_latency_ms", c.link.core_latency_s * 1e3) / 1e3;
    c.link.interruption_s = l->Number("interruption_ms", c.link.interruption_s * 1e3) / 1e3;
    c.link.tx_queue_packets = l->Int("tx_queue_packets", c.link.tx_queue_packets);
    c.link.initial_window_packets = l->Int("initial_window_packets", c.link.initial_window_packets);
  }
  if (auto r = e.Child("reward")) {
    c.reward.w1 = r->Number("w1", c.reward.w1);
    c.reward.w2 = r->Number("w2", c.reward.w2);
    c.reward.w3 = r->Number("w3", c.reward.w3);
  }
  if (auto t = e.Child("train")) {
    TrainingConfig& tc = c.training;
    DqnConfig& d = tc.dqn;
    tc.episodes = t->Int("episodes", tc.episodes);
    tc.episode_s = t->Number("episode_s", tc.episode_s);
    d.seed = static_cast<std::uint64_t>(t->Int("seed", static_cast<int>(d.seed)));
    d.gamma = t->Number("gamma", d.gamma);
    d.n_step = t->Int("n_step", d.n_step);
    d.learning_rate = t->Number("learning_rate", d.learning_rate);
    d.batch_size = t->Int("batch_size", d.batch_size);
    d.buffer_capacity = t->Int("buffer_capacity", d.buffer_capacity);
    d.target_sync_steps = t->Int("target_sync_steps", d.target_sync_steps);
    d.epsilon_start = t->Number("epsilon_start", d.epsilon_start);
    d.epsilon_end = t->Number("epsilon_end", d.epsilon_end);
    d.epsilon_decay_steps = t->Int("epsilon_decay_steps", d.epsilon_decay_steps);
    d.warmup_transitions = t->Int("warmup_transitions", d.warmup_transitions);
    d.train_every = t->Int("train_every", d.train_every);
    d.grad_clip_norm = t->Number("grad_clip_norm", d.grad_clip_norm);
    if (t->Has("hidden")) {
      d.hidden.clear();
      for (double w : t->Numbers("hidden")) d.hidden.push_back(static_cast<int>(w));
    }
    if (auto opt = t->String("optimizer")) {
      if (*opt == "adam") {
        d.optimizer = OptimizerKind::kAdam;
      } else if (*opt == "momentum") {
        d.optimizer = OptimizerKind::kMomentum;
      } else {
        throw SchemaError(t->Path("optimizer"), "expected adam or momentum");
      }
    }
    c.reward.gamma = d.gamma;
  }
  if (auto s = e.Child("sweep")) {
    SweepSpec sweep;
    if (auto axis = s->String("axis")) {
      sweep.axis = Convert(s->Path("axis"), [&] { return ParseSweepAxis(*axis); });
    }
    sweep.values = s->Numbers("values");
    c.sweep = sweep;
  }
  if (auto cmp = e.Child("compare")) {
    if (cmp->Has("strategies")) {
      c.compare_strategies.clear();
      const json& list = doc["experiment"]["compare"]["strategies"];
      if (!list.is_array()) throw SchemaError(cmp->Path("strategies"), "expected an array");
      for (const json& v : list) {
        if (!v.is_string()) throw SchemaError(cmp->Path("strategies"), "expected strings");
        c.compare_strategies.push_back(
            Convert(cmp->Path("strategies"), [&] { return ParseTrigger(v.get<std::string>()); }));
      }
    }
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ExperimentConfig c = ParseExperimentConfig(doc, path);
  // Build once so topology errors surface at load time.
  BuildScenario(doc, path.parent_path());
  return c;
}

void ValidateExperimentConfig(const ExperimentConfig& c) {
  if (c.seeds.empty()) throw ConfigError("no seeds configured");
  if (c.transport == Protocol::kUdp && c.cbr_rate_bps <= 0.0) {
    throw ConfigError("UDP needs experiment.cbr_rate_mbps > 0");
  }
  if (c.duration_s && !(*c.duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (c.sweep) {
    if (c.sweep->values.empty()) throw ConfigError("sweep needs at least one value");
    for (std::size_t i = 1; i < c.sweep->values.size(); ++i) {
      if (!(c.sweep->values[i] > c.sweep->values[i - 1])) {
        throw ConfigError("sweep values must be strictly increasing");
      }
    }
  }
  if (c.training.episodes < 1) throw ConfigError("training needs at least one episode");
  if (!(c.training.episode_s > 0.0)) throw ConfigError("episode length must be positive");
}

}  // namespace aeronet
