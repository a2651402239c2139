#ifndef AERONET_HANDOVER_HANDOVER_H_
#define AERONET_HANDOVER_HANDOVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aeronet/rl/network.h"
#include "aeronet/rl/observation.h"
#include "aeronet/sim/time.h"
#include "aeronet/topology/scenario.h"

namespace aeronet {

// Per-gNB sliding window of the most recent SINR reports.
class MeasurementWindow {
 public:
  MeasurementWindow(std::vector<NodeId> gnbs, int window_len);

  // Throws UnknownGnb for a gNB outside the candidate set.
  void Ingest(NodeId gnb, Tick t, double sinr_db);
  std::optional<double> Average(NodeId gnb) const;
  std::size_t Count(NodeId gnb) const;
  int window_len() const { return window_len_; }
  std::span<const NodeId> gnbs() const { return gnbs_; }

 private:
  struct Sample {
    Tick t;
    double sinr_db;
  };
  std::size_t Slot(NodeId gnb) const;

  std::vector<NodeId> gnbs_;
  int window_len_;
  std::vector<std::vector<Sample>> rings_;
  std::vector<std::size_t> heads_;
};

enum class Trigger { kA3, kUcb, kDqn };
std::string_view TriggerName(Trigger t);
// Accepts a3 | ucb | dqn (case-insensitive). Throws ConfigError.
Trigger ParseTrigger(std::string_view name);

struct A3Config {
  double offset_db = 3.0;
  double time_to_trigger_s = 0.160;
};

// Event A3 with hysteresis offset and time-to-trigger. The entering
// condition is tracked per neighbour and resets as soon as it is not met at
// a report.
class A3Evaluator {
 public:
  explicit A3Evaluator(A3Config config) : config_(config) {}

  // Returns the handover target, or nullopt to stay.
  std::optional<NodeId> Evaluate(const MeasurementWindow& window, NodeId serving,
                                 Tick now);
  void Reset() { entered_.clear(); }
  const A3Config& config() const { return config_; }

 private:
  struct Entered {
    NodeId gnb;
    Tick since;
  };
  A3Config config_;
  std::vector<Entered> entered_;
};

struct UcbState {
  std::vector<NodeId> arms;  // ascending id
  std::vector<std::int64_t> pulls;
  std::vector<double> mean;
  std::int64_t t = 0;
  double c = 1.4142135623730951;

  static UcbState ForArms(std::vector<NodeId> arms, double c);
};

// Index of the next arm: the lowest unpulled arm, else the argmax of
// mean + c * sqrt(ln t / n) with ties to the lowest index.
std::size_t UcbSelect(const UcbState& state);
void UcbUpdate(UcbState& state, std::size_t arm, double reward);

struct DecisionContext {
  Tick now = 0;
  NodeId serving = 0;
  std::span<const NodeId> candidates;
  const MeasurementWindow* window = nullptr;
  // Throughput of the interface over the last decision epoch.
  double throughput_bps = 0.0;
  double capacity_max_bps = 1.0;
  Tick last_handover = 0;
  int handover_count = 0;
};

class HandoverStrategy {
 public:
  virtual ~HandoverStrategy() = default;
  virtual Trigger trigger() const = 0;
  // true: evaluated at every measurement report; false: once per epoch.
  virtual bool per_report() const = 0;
  // Target gNB, or nullopt to stay.
  virtual std::optional<NodeId> Decide(const DecisionContext& ctx) = 0;
  virtual void OnHandover(Tick /*now*/) {}
};

class A3Strategy : public HandoverStrategy {
 public:
  explicit A3Strategy(A3Config config) : a3_(config) {}
  Trigger trigger() const override { return Trigger::kA3; }
  bool per_report() const override { return true; }
  std::optional<NodeId> Decide(const DecisionContext& ctx) override;
  void OnHandover(Tick) override { a3_.Reset(); }

 private:
  A3Evaluator a3_;
};

// Upper-confidence-bound bandit over candidate gNBs. The reward of an arm is
// the normalised throughput observed while dwelling on it for one epoch.
class UcbStrategy : public HandoverStrategy {
 public:
  UcbStrategy(std::vector<NodeId> candidates, double c);
  Trigger trigger() const override { return Trigger::kUcb; }
  bool per_report() const override { return false; }
  std::optional<NodeId> Decide(const DecisionContext& ctx) override;
  const UcbState& state() const { return state_; }

 private:
  UcbState state_;
};

// Frozen Q-network policy.
class DqnStrategy : public HandoverStrategy {
 public:
  DqnStrategy(std::shared_ptr<const QNetwork> network, ObservationConfig observation);
  Trigger trigger() const override { return Trigger::kDqn; }
  bool per_report() const override { return false; }
  std::optional<NodeId> Decide(const DecisionContext& ctx) override;

 private:
  std::shared_ptr<const QNetwork> network_;
  ObservationConfig observation_;
};

// Agent state for one interface from its measurement window.
AgentState ObserveInterface(const DecisionContext& ctx,
                            const ObservationConfig& config);

struct HandoverConfig {
  int window_len = 10;
  A3Config a3;
  double decision_epoch_s = 1.0;
  double pingpong_window_s = 1.0;
  double ucb_c = 1.4142135623730951;
  double interruption_s = 0.050;
};

struct HandoverRecord {
  Tick t = 0;
  NodeId ue = 0;
  std::size_t interface_index = 0;
  int interface_group = 0;
  NodeId from = 0;
  NodeId to = 0;
  Trigger trigger = Trigger::kA3;
  bool pingpong = false;
};

// Measurement collection, decision and execution for one UE interface.
class HandoverManager {
 public:
  HandoverManager(NodeId ue, std::size_t interface_index, int interface_group,
                  std::vector<NodeId> candidates, NodeId serving,
                  const HandoverConfig& config,
                  std::unique_ptr<HandoverStrategy> strategy);

  void Ingest(NodeId gnb, Tick t, double sinr_db);

  bool InInterruption(Tick t) const { return t < blackout_until_; }

  // Runs the strategy. Never decides during an interruption window.
  // ctx.serving, candidates, window and handover bookkeeping are filled in.
  std::optional<NodeId> Decide(DecisionContext ctx);

  // Switches to target. Throws InvalidTarget if target is the serving gNB
  // or not a candidate.
  HandoverRecord Execute(NodeId target, Tick t, Trigger trigger);

  NodeId serving() const { return serving_; }
  std::span<const NodeId> candidates() const { return candidates_; }
  std::size_t CandidateIndex(NodeId gnb) const;
  const MeasurementWindow& window() const { return window_; }
  HandoverStrategy* strategy() { return strategy_.get(); }
  const std::vector<HandoverRecord>& records() const { return records_; }
  int handover_count() const { return static_cast<int>(records_.size()); }
  int pingpong_count() const { return pingpongs_; }
  Tick last_handover() const { return last_handover_; }
  Tick blackout_until() const { return blackout_until_; }
  NodeId ue() const { return ue_; }
  std::size_t interface_index() const { return interface_index_; }
  int interface_group() const { return interface_group_; }

 private:
  NodeId ue_;
  std::size_t interface_index_;
  int interface_group_;
  std::vector<NodeId> candidates_;
  NodeId serving_;
  Tick pingpong_ticks_;
  Tick interruption_ticks_;
  MeasurementWindow window_;
  std::unique_ptr<HandoverStrategy> strategy_;
  std::vector<HandoverRecord> records_;
  int pingpongs_ = 0;
  Tick last_handover_ = 0;
  Tick blackout_until_ = 0;
};

}  // namespace aeronet

#endif  // AERONET_HANDOVER_HANDOVER_H_
