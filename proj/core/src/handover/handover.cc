#include "aeronet/handover/handover.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "aeronet/error.h"

namespace aeronet {

MeasurementWindow::MeasurementWindow(std::vector<NodeId> gnbs, int window_len)
    : gnbs_(std::move(gnbs)), window_len_(window_len) {
  if (window_len_ < 1) throw ConfigError("measurement window must hold at least one sample");
  rings_.resize(gnbs_.size());
  heads_.assign(gnbs_.size(), 0);
}

std::size_t MeasurementWindow::Slot(NodeId gnb) const {
  auto it = std::find(gnbs_.begin(), gnbs_.end(), gnb);
  if (it == gnbs_.end()) {
    throw UnknownGnb("gNB " + std::to_string(gnb) + " is not a candidate");
  }
  return static_cast<std::size_t>(it - gnbs_.begin());
}

void MeasurementWindow::Ingest(NodeId gnb, Tick t, double sinr_db) {
  const std::size_t slot = Slot(gnb);
  std::vector<Sample>& ring = rings_[slot];
  if (ring.size() < static_cast<std::size_t>(window_len_)) {
    ring.push_back({t, sinr_db});
  } else {
    ring[heads_[slot]] = {t, sinr_db};
    heads_[slot] = (heads_[slot] + 1) % ring.size();
  }
}

std::optional<double> MeasurementWindow::Average(NodeId gnb) const {
  const std::vector<Sample>& ring = rings_[Slot(gnb)];
  if (ring.empty()) return std::nullopt;
  double sum = 0.0;
  for (const Sample& s : ring) sum += s.sinr_db;
  return sum / static_cast<double>(ring.size());
}

std::size_t MeasurementWindow::Count(NodeId gnb) const {
  return rings_[Slot(gnb)].size();
}

std::string_view TriggerName(Trigger t) {
  switch (t) {
    case Trigger::kA3: return "A3";
    case Trigger::kUcb: return "UCB";
    case Trigger::kDqn: return "DQN";
  }
  return "?";
}

Trigger ParseTrigger(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "a3") return Trigger::kA3;
  if (lower == "ucb") return Trigger::kUcb;
  if (lower == "dqn") return Trigger::kDqn;
  throw ConfigError("unknown strategy '" + std::string(name) + "' (expected A3, UCB or DQN)");
}

std::optional<NodeId> A3Evaluator::Evaluate(const MeasurementWindow& window,
                                            NodeId serving, Tick now) {
  const std::optional<double> serving_avg = window.Average(serving);
  if (!serving_avg) {
    entered_.clear();
    return std::nullopt;
  }
  const Tick ttt = ToTicks(config_.time_to_trigger_s);
  std::vector<Entered> still;
  std::optional<NodeId> best;
  double best_avg = -INFINITY;
  for (NodeId gnb : window.gnbs()) {
    if (gnb == serving) continue;
    const std::optional<double> avg = window.Average(gnb);
    if (!avg || !(*avg > *serving_avg + config_.offset_db)) continue;
    auto it = std::find_if(entered_.begin(), entered_.end(),
                           [gnb](const Entered& e) { return e.gnb == gnb; });
    const Tick since = it == entered_.end() ? now : it->since;
    still.push_back({gnb, since});
    if (now - since >= ttt && *avg > best_avg) {
      best = gnb;
      best_avg = *avg;
    }
  }
  entered_ = std::move(still);
  return best;
}

UcbState UcbState::ForArms(std::vector<NodeId> arms, double c) {
  std::sort(arms.begin(), arms.end());
  UcbState s;
  s.pulls.assign(arms.size(), 0);
  s.mean.assign(arms.size(), 0.0);
  s.arms = std::move(arms);
  s.c = c;
  return s;
}

std::size_t UcbSelect(const UcbState& s) {
  if (s.arms.empty()) throw NoCandidates("UCB has no arms");
  for (std::size_t j = 0; j < s.arms.size(); ++j) {
    if (s.pulls[j] == 0) return j;
  }
  const double log_t = std::log(static_cast<double>(std::max<std::int64_t>(s.t, 1)));
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t j = 0; j < s.arms.size(); ++j) {
    const double score =
        s.mean[j] + s.c * std::sqrt(log_t / static_cast<double>(s.pulls[j]));
    if (score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

void UcbUpdate(UcbState& s, std::size_t arm, double reward) {
  ++s.pulls[arm];
  ++s.t;
  s.mean[arm] += (reward - s.mean[arm]) / static_cast<double>(s.pulls[arm]);
}

std::optional<NodeId> A3Strategy::Decide(const DecisionContext& ctx) {
  return a3_.Evaluate(*ctx.window, ctx.serving, ctx.now);
}

UcbStrategy::UcbStrategy(std::vector<NodeId> candidates, double c)
    : state_(UcbState::ForArms(std::move(candidates), c)) {}

std::optional<NodeId> UcbStrategy::Decide(const DecisionContext& ctx) {
  auto it = std::find(state_.arms.begin(), state_.arms.end(), ctx.serving);
  if (it != state_.arms.end()) {
    const double reward = ctx.capacity_max_bps > 0.0
                              ? std::clamp(ctx.throughput_bps / ctx.capacity_max_bps, 0.0, 1.0)
                              : 0.0;
    UcbUpdate(state_, static_cast<std::size_t>(it - state_.arms.begin()), reward);
  }
  const NodeId target = state_.arms[UcbSelect(state_)];
  if (target == ctx.serving) return std::nullopt;
  return target;
}

AgentState ObserveInterface(const DecisionContext& ctx,
                            const ObservationConfig& config) {
  std::vector<std::optional<double>> avg;
  avg.reserve(ctx.candidates.size());
  std::size_t serving_index = ctx.candidates.size();
  for (std::size_t j = 0; j < ctx.candidates.size(); ++j) {
    avg.push_back(ctx.window->Average(ctx.candidates[j]));
    if (ctx.candidates[j] == ctx.serving) serving_index = j;
  }
  ObservationInputs in;
  in.avg_sinr_db = avg;
  in.serving_index = serving_index;
  in.throughput_bps = ctx.throughput_bps;
  in.capacity_max_bps = ctx.capacity_max_bps;
  in.since_handover_s = ToSeconds(ctx.now - ctx.last_handover);
  in.handover_count = ctx.handover_count;
  return Observe(in, config);
}

DqnStrategy::DqnStrategy(std::shared_ptr<const QNetwork> network,
                         ObservationConfig observation)
    : network_(std::move(network)), observation_(observation) {
  if (!network_) throw ConfigError("DQN strategy needs a network");
}

std::optional<NodeId> DqnStrategy::Decide(const DecisionContext& ctx) {
  AgentState s;
  try {
    s = ObserveInterface(ctx, observation_);
  } catch (const ColdStart&) {
    return std::nullopt;
  }
  const std::vector<double> q = network_->Forward(s.Flatten());
  const auto current = static_cast<int>(
      std::find(ctx.candidates.begin(), ctx.candidates.end(), ctx.serving) -
      ctx.candidates.begin());
  const NodeId target = ctx.candidates[ActGreedy(q, current)];
  if (target == ctx.serving) return std::nullopt;
  return target;
}

HandoverManager::HandoverManager(NodeId ue, std::size_t interface_index,
                                 int interface_group, std::vector<NodeId> candidates,
                                 NodeId serving, const HandoverConfig& config,
                                 std::unique_ptr<HandoverStrategy> strategy)
    : ue_(ue),
      interface_index_(interface_index),
      interface_group_(interface_group),
      candidates_(std::move(candidates)),
      serving_(serving),
      pingpong_ticks_(ToTicks(config.pingpong_window_s)),
      interruption_ticks_(ToTicks(config.interruption_s)),
      window_(candidates_, config.window_len),
      strategy_(std::move(strategy)) {
  if (candidates_.empty()) throw NoCandidates("interface has no candidate gNBs");
  CandidateIndex(serving_);
}

std::size_t HandoverManager::CandidateIndex(NodeId gnb) const {
  auto it = std::find(candidates_.begin(), candidates_.end(), gnb);
  if (it == candidates_.end()) {
    throw InvalidTarget("gNB " + std::to_string(gnb) + " is not a candidate");
  }
  return static_cast<std::size_t>(it - candidates_.begin());
}

void HandoverManager::Ingest(NodeId gnb, Tick t, double sinr_db) {
  window_.Ingest(gnb, t, sinr_db);
}

std::optional<NodeId> HandoverManager::Decide(DecisionContext ctx) {
  if (!strategy_ || InInterruption(ctx.now)) return std::nullopt;
  ctx.serving = serving_;
  ctx.candidates = candidates_;
  ctx.window = &window_;
  ctx.last_handover = last_handover_;
  ctx.handover_count = handover_count();
  return strategy_->Decide(ctx);
}

HandoverRecord HandoverManager::Execute(NodeId target, Tick t, Trigger trigger) {
  if (target == serving_) throw InvalidTarget("target is already the serving gNB");
  CandidateIndex(target);
  HandoverRecord rec;
  rec.t = t;
  rec.ue = ue_;
  rec.interface_index = interface_index_;
  rec.interface_group = interface_group_;
  rec.from = serving_;
  rec.to = target;
  rec.trigger = trigger;
  if (!records_.empty()) {
    const HandoverRecord& prev = records_.back();
    rec.pingpong = prev.from == target && prev.to == serving_ &&
                   t - prev.t <= pingpong_ticks_;
  }
  if (rec.pingpong) ++pingpongs_;
  serving_ = target;
  last_handover_ = t;
  blackout_until_ = t + interruption_ticks_;
  records_.push_back(rec);
  if (strategy_) strategy_->OnHandover(t);
  return rec;
}

}  // namespace aeronet
