#ifndef AERONET_ENGINE_SIMULATION_H_
#define AERONET_ENGINE_SIMULATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "aeronet/channel/channel.h"
#include "aeronet/handover/handover.h"
#include "aeronet/mobility/mobility.h"
#include "aeronet/rl/network.h"
#include "aeronet/rl/observation.h"
#include "aeronet/sim/event_loop.h"
#include "aeronet/sim/rng.h"
#include "aeronet/topology/scenario.h"
#include "aeronet/transport/flow.h"
#include "aeronet/transport/link.h"

namespace aeronet {

struct SimulationOptions {
  ChannelConfig channel;
  LinkConfig link;
  HandoverConfig handover;
  Trigger strategy = Trigger::kA3;
  // When set, no strategy runs inside the loop; the caller drives
  // handovers through Simulation::Handover() (training, scripted tests).
  bool external_decisions = false;
  std::shared_ptr<const QNetwork> policy;  // Trigger::kDqn
  ObservationConfig observation;
  Protocol transport = Protocol::kQuic;
  // > 0 gives every flow a constant-bit-rate source; otherwise bulk
  // transfer. UDP always needs a rate.
  double cbr_rate_bps = 0.0;
  double mobility_period_s = 0.100;
  double channel_period_s = 0.010;
  double measurement_period_s = 0.040;
  double trace_period_s = 0.100;
  bool record_traces = true;
  // Overrides scenario.duration_s when set.
  std::optional<double> duration_s;
};

struct PositionRow {
  Tick t;
  NodeId ue;
  Vec3 position;
};

struct SinrRow {
  Tick t;
  NodeId ue;
  std::size_t interface_index;
  NodeId gnb;
  double sinr_db;
  bool serving;
};

struct FlowRow {
  Tick t;
  std::uint32_t flow_id;
  Protocol protocol;
  std::uint32_t path_id;
  double cwnd;
  double srtt_ms;
  std::int64_t delivered_bytes;
  std::int64_t lost_packets;
  std::int64_t queue_drops;
};

// One complete, self-contained simulation instance: mobility, channel,
// per-interface handover managers and one transport flow per UE (flow id =
// UE id). UDP, TCP and QUIC flows ride the UE's first interface; MP-QUIC
// opens one path per interface.
//
// Uplink model: every active interface transmits at full power on its
// carrier. A UE served by gNB g gets 1/n_g of g's bandwidth (n_g = UEs
// attached to g) and interferes with every other gNB of its carrier with
// that same weight. Interference from UEs of the measuring gNB's own cell is
// orthogonal and ignored.
class Simulation {
 public:
  Simulation(Scenario scenario, SimulationOptions options);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  SimSummary RunUntil(Tick t);
  // Runs to the configured duration.
  SimSummary Run();

  Tick now() const { return loop_.now(); }
  Tick end() const { return end_; }
  const Scenario& scenario() const { return scenario_; }
  const SimulationOptions& options() const { return options_; }
  const EventLoop& loop() const { return loop_; }

  std::size_t interface_count() const { return interfaces_.size(); }
  const HandoverManager& manager(std::size_t iface) const { return *interfaces_[iface].manager; }
  NodeId interface_ue(std::size_t iface) const;

  // Performs a handover now unless the interface is in an interruption
  // window (returns nullopt). Throws InvalidTarget like
  // HandoverManager::Execute.
  std::optional<HandoverRecord> Handover(std::size_t iface, NodeId target, Trigger trigger);

  // Decision context of an interface with the throughput of the trailing
  // window_s seconds.
  DecisionContext Context(std::size_t iface, double window_s) const;
  double InterfaceThroughputBps(std::size_t iface, double window_s) const;
  double CapacityMaxBps(std::size_t iface) const;
  // Latest sampled SINR from the interface to one of its candidates.
  double LatestSinrDb(std::size_t iface, NodeId gnb) const;

  std::size_t flow_count() const { return flows_.size(); }
  const Flow& flow(std::size_t i) const { return flows_[i]; }
  Flow& mutable_flow(std::size_t i) { return flows_[i]; }

  const Vec3& position(std::size_t ue_index) const { return ues_[ue_index].state.position; }
  // Hash over every sampled position of the UE; equal hashes mean the UE
  // flew the same path.
  std::uint64_t trajectory_hash(std::size_t ue_index) const { return ues_[ue_index].hash; }

  std::vector<HandoverRecord> handovers() const;
  const std::vector<FlowRow>& flow_rows() const { return flow_rows_; }
  const std::vector<SinrRow>& sinr_rows() const { return sinr_rows_; }
  const std::vector<PositionRow>& position_rows() const { return position_rows_; }

 private:
  struct UeRuntime {
    MobilitySpec mobility;
    KinematicState state;
    RngStream rng;
    std::uint64_t hash;
  };
  struct InterfaceRuntime {
    std::size_t ue_index = 0;
    int group = 0;
    std::vector<NodeId> candidates;
    std::vector<std::size_t> candidate_index;  // into scenario.gnbs
    std::unique_ptr<HandoverManager> manager;
    std::vector<double> sinr_db;  // per candidate
    double rate_bps = 0.0;
    double loss_p = 1.0;
    double credit = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> flow_paths;  // (flow, path)
  };

  void SampleChannel(Tick t);
  void UpdateInterference();
  void OnMobility(Tick t);
  void OnMeasurement(Tick t);
  void OnDecisionEpoch(Tick t);
  void OnTraffic(Tick t);
  void RecordFlows(Tick t);
  void ExecuteHandover(std::size_t iface, NodeId target, Trigger trigger, Tick t);
  std::unique_ptr<HandoverStrategy> MakeStrategy(const InterfaceRuntime& iface) const;
  std::size_t ServingIndex(const InterfaceRuntime& iface) const;

  Scenario scenario_;
  SimulationOptions options_;
  EventLoop loop_;
  ChannelModel channel_;
  RngStream traffic_rng_;
  Tick end_ = 0;
  Tick one_way_ticks_ = 10;
  std::vector<UeRuntime> ues_;
  std::vector<InterfaceRuntime> interfaces_;
  std::vector<Flow> flows_;
  // rx_dbm_[ue][gnb] from the latest channel sample.
  std::vector<std::vector<double>> rx_dbm_;
  std::vector<double> noise_dbm_;  // per gNB
  std::vector<HandoverRecord> handover_log_;
  std::vector<FlowRow> flow_rows_;
  std::vector<SinrRow> sinr_rows_;
  std::vector<PositionRow> position_rows_;
};

}  // namespace aeronet

#endif  // AERONET_ENGINE_SIMULATION_H_
