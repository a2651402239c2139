#include "aeronet/engine/simulation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "aeronet/error.h"

namespace aeronet {
namespace {

std::uint64_t HashPosition(std::uint64_t h, const Vec3& p) {
  const std::uint64_t words[3] = {std::bit_cast<std::uint64_t>(p.x),
                                  std::bit_cast<std::uint64_t>(p.y),
                                  std::bit_cast<std::uint64_t>(p.z)};
  return Fnv1a64(std::string_view(reinterpret_cast<const char*>(words), sizeof words), h);
}

Tick PeriodTicks(double seconds, const char* what) {
  const Tick t = ToTicks(seconds);
  if (t <= 0) throw ConfigError(std::string(what) + " period must be at least one tick");
  return t;
}

}  // namespace

Simulation::Simulation(Scenario scenario, SimulationOptions options)
    : scenario_(std::move(scenario)),
      options_(std::move(options)),
      channel_(scenario_, options_.channel, scenario_.seed),
      traffic_rng_(scenario_.seed, "traffic") {
  const double duration = options_.duration_s.value_or(scenario_.duration_s);
  if (!(duration > 0.0)) throw ConfigError("simulation duration must be positive");
  end_ = ToTicks(duration);
  one_way_ticks_ = std::max<Tick>(1, ToTicks(options_.link.core_latency_s));
  options_.handover.interruption_s = options_.link.interruption_s;
  if (options_.transport == Protocol::kUdp && options_.cbr_rate_bps <= 0.0) {
    throw ConfigError("UDP traffic needs a positive CBR rate");
  }
  if (!options_.external_decisions && options_.strategy == Trigger::kDqn &&
      !options_.policy) {
    throw ConfigError("the DQN strategy needs a trained checkpoint");
  }

  const std::size_t n_gnb = scenario_.gnbs.size();
  for (const GnbConfig& g : scenario_.gnbs) {
    noise_dbm_.push_back(ThermalNoiseDbm(g.bandwidth_mhz * 1e6, g.noise_figure_db));
  }

  for (std::size_t u = 0; u < scenario_.ues.size(); ++u) {
    const UeConfig& ue = scenario_.ues[u];
    UeRuntime rt{ue.mobility, {}, RngStream(scenario_.mobility_seed(), "mobility", ue.id), 0};
    rt.state = InitialKinematics(rt.mobility, ue.initial_position, rt.rng);
    rt.hash = HashPosition(Fnv1a64("trajectory"), rt.state.position);
    ues_.push_back(std::move(rt));
  }
  rx_dbm_.assign(ues_.size(), std::vector<double>(n_gnb, -INFINITY));

  for (std::size_t u = 0; u < scenario_.ues.size(); ++u) {
    const UeConfig& ue = scenario_.ues[u];
    for (const InterfaceBinding& b : ue.interfaces) {
      InterfaceRuntime iface;
      iface.ue_index = u;
      iface.group = b.interface_group;
      iface.candidates = b.candidate_gnbs;
      for (NodeId id : iface.candidates) iface.candidate_index.push_back(scenario_.GnbIndex(id));
      iface.sinr_db.assign(iface.candidates.size(), -INFINITY);
      interfaces_.push_back(std::move(iface));
    }
  }

  // Initial attachment on interference-free SNR.
  SampleChannel(0);
  std::size_t slot = 0;
  for (std::size_t u = 0; u < scenario_.ues.size(); ++u) {
    for (const InterfaceBinding& b : scenario_.ues[u].interfaces) {
      InterfaceRuntime& iface = interfaces_[slot];
      NodeId serving;
      if (b.serving_gnb) {
        serving = *b.serving_gnb;
      } else {
        std::vector<CandidateSinr> snr;
        for (std::size_t j = 0; j < iface.candidates.size(); ++j) {
          const std::size_t g = iface.candidate_index[j];
          snr.push_back({iface.candidates[j], rx_dbm_[u][g] - noise_dbm_[g]});
        }
        serving = SelectServing(snr);
      }
      iface.manager = std::make_unique<HandoverManager>(
          scenario_.ues[u].id, slot, iface.group, iface.candidates, serving,
          options_.handover, MakeStrategy(iface));
      ++slot;
    }
  }

  TrafficSource source;
  if (options_.cbr_rate_bps > 0.0) {
    source.kind = TrafficSource::Kind::kCbr;
    source.rate_bps = options_.cbr_rate_bps;
  }
  slot = 0;
  for (std::size_t u = 0; u < scenario_.ues.size(); ++u) {
    const std::size_t n_if = scenario_.ues[u].interfaces.size();
    if (n_if == 0) continue;
    std::vector<FlowPathBinding> paths;
    const std::size_t used = options_.transport == Protocol::kMpQuic ? n_if : 1;
    for (std::size_t k = 0; k < used; ++k) {
      paths.push_back({slot + k, interfaces_[slot + k].group});
      interfaces_[slot + k].flow_paths.push_back({flows_.size(), k});
    }
    flows_.emplace_back(scenario_.ues[u].id, options_.transport, source, std::move(paths),
                        options_.link, 0);
    slot += n_if;
  }
  UpdateInterference();

  const Tick mobility = PeriodTicks(options_.mobility_period_s, "mobility");
  const Tick channel = PeriodTicks(options_.channel_period_s, "channel");
  const Tick measurement = PeriodTicks(options_.measurement_period_s, "measurement");
  const Tick epoch = PeriodTicks(options_.handover.decision_epoch_s, "decision");
  const Tick trace = PeriodTicks(options_.trace_period_s, "trace");

  if (options_.record_traces) {
    for (std::size_t u = 0; u < ues_.size(); ++u) {
      position_rows_.push_back({0, scenario_.ues[u].id, ues_[u].state.position});
    }
  }
  loop_.SchedulePeriodic(mobility, mobility, EventKind::kMobilityUpdate, 0,
                         [this](Tick t) { OnMobility(t); });
  loop_.SchedulePeriodic(channel, channel, EventKind::kChannelSample, 0, [this](Tick t) {
    SampleChannel(t);
    UpdateInterference();
  });
  loop_.SchedulePeriodic(measurement, measurement, EventKind::kMeasurementReport, 0,
                         [this](Tick t) { OnMeasurement(t); });
  if (!options_.external_decisions && options_.strategy != Trigger::kA3) {
    loop_.SchedulePeriodic(epoch, epoch, EventKind::kHandoverDecision, 0,
                           [this](Tick t) { OnDecisionEpoch(t); });
  }
  loop_.SchedulePeriodic(0, 1, EventKind::kTrafficTick, 0, [this](Tick t) { OnTraffic(t); });
  if (options_.record_traces) {
    loop_.SchedulePeriodic(trace, trace, EventKind::kFlowTimer, 0,
                           [this](Tick t) { RecordFlows(t); });
  }
}

std::unique_ptr<HandoverStrategy> Simulation::MakeStrategy(
    const InterfaceRuntime& iface) const {
  if (options_.external_decisions) return nullptr;
  switch (options_.strategy) {
    case Trigger::kA3:
      return std::make_unique<A3Strategy>(options_.handover.a3);
    case Trigger::kUcb:
      return std::make_unique<UcbStrategy>(iface.candidates, options_.handover.ucb_c);
    case Trigger::kDqn: {
      const int actions = options_.policy->shape().actions;
      if (actions != static_cast<int>(iface.candidates.size())) {
        throw ConfigError("checkpoint controls " + std::to_string(actions) +
                          " gNBs but the interface has " +
                          std::to_string(iface.candidates.size()) + " candidates");
      }
      return std::make_unique<DqnStrategy>(options_.policy, options_.observation);
    }
  }
  return nullptr;
}

NodeId Simulation::interface_ue(std::size_t iface) const {
  return scenario_.ues[interfaces_[iface].ue_index].id;
}

std::size_t Simulation::ServingIndex(const InterfaceRuntime& iface) const {
  const NodeId serving = iface.manager->serving();
  return static_cast<std::size_t>(
      std::find(iface.candidates.begin(), iface.candidates.end(), serving) -
      iface.candidates.begin());
}

void Simulation::SampleChannel(Tick t) {
  const double t_s = ToSeconds(t);
  std::vector<bool> needed(scenario_.gnbs.size());
  for (std::size_t u = 0; u < ues_.size(); ++u) {
    // A UE's power is needed at its candidates and, as interference, at
    // every gNB sharing a carrier group with one of its interfaces.
    std::fill(needed.begin(), needed.end(), false);
    for (const InterfaceRuntime& iface : interfaces_) {
      if (iface.ue_index != u) continue;
      for (std::size_t g : iface.candidate_index) needed[g] = true;
      for (std::size_t g = 0; g < scenario_.gnbs.size(); ++g) {
        if (scenario_.gnbs[g].interface_group == iface.group) needed[g] = true;
      }
    }
    for (std::size_t g = 0; g < scenario_.gnbs.size(); ++g) {
      if (!needed[g]) continue;
      rx_dbm_[u][g] = channel_.Sample(u, g, ues_[u].state.position, t_s).rx_power_dbm;
    }
  }
}

void Simulation::UpdateInterference() {
  if (interfaces_.empty() || !interfaces_[0].manager) return;
  const std::size_t n_gnb = scenario_.gnbs.size();
  std::vector<int> load(n_gnb, 0);
  std::vector<std::size_t> serving_gnb(interfaces_.size());
  for (std::size_t k = 0; k < interfaces_.size(); ++k) {
    const InterfaceRuntime& iface = interfaces_[k];
    serving_gnb[k] = iface.candidate_index[ServingIndex(iface)];
    if (!iface.flow_paths.empty()) ++load[serving_gnb[k]];
  }
  std::vector<Interferer> interferers;
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    InterfaceRuntime& iface = interfaces_[i];
    for (std::size_t j = 0; j < iface.candidates.size(); ++j) {
      const std::size_t g = iface.candidate_index[j];
      interferers.clear();
      for (std::size_t k = 0; k < interfaces_.size(); ++k) {
        const InterfaceRuntime& other = interfaces_[k];
        if (k == i || other.flow_paths.empty() || other.group != iface.group) continue;
        if (serving_gnb[k] == g) continue;  // orthogonal within the cell
        interferers.push_back(
            {rx_dbm_[other.ue_index][g], 1.0 / static_cast<double>(load[serving_gnb[k]])});
      }
      iface.sinr_db[j] = UplinkSinrDb(rx_dbm_[iface.ue_index][g], interferers, noise_dbm_[g]);
    }
    const std::size_t s = ServingIndex(iface);
    const std::size_t g = iface.candidate_index[s];
    const double share = 1.0 / static_cast<double>(std::max(load[g], 1));
    const LinkCapacity cap = Capacity(iface.sinr_db[s],
                                      scenario_.gnbs[g].bandwidth_mhz * share, options_.link);
    iface.rate_bps = cap.rate_bps;
    iface.loss_p = cap.per_packet_loss;
  }
}

void Simulation::OnMobility(Tick t) {
  const double dt = options_.mobility_period_s;
  for (std::size_t u = 0; u < ues_.size(); ++u) {
    UeRuntime& ue = ues_[u];
    if (ue.mobility.kind != MobilityKind::kStatic) {
      ue.state = Step(ue.mobility, ue.state, dt, ue.rng);
    }
    ue.hash = HashPosition(ue.hash, ue.state.position);
    if (options_.record_traces) {
      position_rows_.push_back({t, scenario_.ues[u].id, ue.state.position});
    }
  }
}

void Simulation::OnMeasurement(Tick t) {
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    InterfaceRuntime& iface = interfaces_[i];
    const NodeId serving = iface.manager->serving();
    for (std::size_t j = 0; j < iface.candidates.size(); ++j) {
      iface.manager->Ingest(iface.candidates[j], t, iface.sinr_db[j]);
      if (options_.record_traces) {
        sinr_rows_.push_back({t, scenario_.ues[iface.ue_index].id, i, iface.candidates[j],
                              iface.sinr_db[j], iface.candidates[j] == serving});
      }
    }
    HandoverStrategy* strategy = iface.manager->strategy();
    if (strategy && strategy->per_report()) {
      if (auto target = iface.manager->Decide(Context(i, options_.handover.decision_epoch_s))) {
        ExecuteHandover(i, *target, strategy->trigger(), t);
      }
    }
  }
}

void Simulation::OnDecisionEpoch(Tick t) {
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    HandoverStrategy* strategy = interfaces_[i].manager->strategy();
    if (!strategy || strategy->per_report()) continue;
    if (auto target = interfaces_[i].manager->Decide(Context(i, options_.handover.decision_epoch_s))) {
      ExecuteHandover(i, *target, strategy->trigger(), t);
    }
  }
}

void Simulation::OnTraffic(Tick t) {
  for (Flow& f : flows_) {
    f.Receive(t);
    f.Send(t);
  }
  const double tick_s = kSecondsPerTick;
  for (InterfaceRuntime& iface : interfaces_) {
    if (iface.flow_paths.empty()) continue;
    if (iface.manager->InInterruption(t) || iface.rate_bps <= 0.0) {
      iface.credit = 0.0;
      continue;
    }
    iface.credit += iface.rate_bps * tick_s / options_.link.packet_bits();
    auto budget = static_cast<int>(std::floor(iface.credit));
    bool backlog = false;
    for (const auto& [flow, path] : iface.flow_paths) {
      if (budget > 0) {
        const int served = flows_[flow].ServePath(path, budget, iface.loss_p, t,
                                                  one_way_ticks_, traffic_rng_);
        budget -= served;
        iface.credit -= served;
      }
      if (flows_[flow].queued(path) > 0) backlog = true;
    }
    // Unused airtime is not banked.
    if (!backlog) iface.credit = std::min(iface.credit, 1.0);
  }
  for (Flow& f : flows_) f.EndTick(t);
}

void Simulation::RecordFlows(Tick t) {
  for (const Flow& f : flows_) {
    for (std::size_t p = 0; p < f.path_count(); ++p) {
      const PathState s = f.PathSnapshot(p);
      const PacketCounters c = f.PathCounters(p);
      flow_rows_.push_back({t, f.id(), f.protocol(), s.path_id, s.cwnd, s.srtt_s * 1e3,
                            c.delivered * options_.link.packet_bytes, c.lost, c.queue_drops});
    }
  }
}

void Simulation::ExecuteHandover(std::size_t i, NodeId target, Trigger trigger, Tick t) {
  InterfaceRuntime& iface = interfaces_[i];
  handover_log_.push_back(iface.manager->Execute(target, t, trigger));
  for (const auto& [flow, path] : iface.flow_paths) flows_[flow].OnHandover(path, t);
  iface.credit = 0.0;
  UpdateInterference();
}

std::optional<HandoverRecord> Simulation::Handover(std::size_t iface, NodeId target,
                                                   Trigger trigger) {
  HandoverManager& m = *interfaces_.at(iface).manager;
  if (target == m.serving()) throw InvalidTarget("target is already the serving gNB");
  m.CandidateIndex(target);
  if (m.InInterruption(now())) return std::nullopt;
  ExecuteHandover(iface, target, trigger, now());
  return handover_log_.back();
}

double Simulation::InterfaceThroughputBps(std::size_t i, double window_s) const {
  double bps = 0.0;
  for (const auto& [flow, path] : interfaces_[i].flow_paths) {
    bps += flows_[flow].PathStats(path, now(), window_s).throughput_bps;
  }
  return bps;
}

double Simulation::CapacityMaxBps(std::size_t i) const {
  double bw = 0.0;
  for (std::size_t g : interfaces_[i].candidate_index) {
    bw = std::max(bw, scenario_.gnbs[g].bandwidth_mhz);
  }
  return options_.link.MaxRateBps(bw);
}

double Simulation::LatestSinrDb(std::size_t i, NodeId gnb) const {
  const InterfaceRuntime& iface = interfaces_[i];
  return iface.sinr_db[iface.manager->CandidateIndex(gnb)];
}

DecisionContext Simulation::Context(std::size_t i, double window_s) const {
  const HandoverManager& m = *interfaces_[i].manager;
  DecisionContext ctx;
  ctx.now = now();
  ctx.serving = m.serving();
  ctx.candidates = m.candidates();
  ctx.window = &m.window();
  ctx.throughput_bps = InterfaceThroughputBps(i, window_s);
  ctx.capacity_max_bps = CapacityMaxBps(i);
  ctx.last_handover = m.last_handover();
  ctx.handover_count = m.handover_count();
  return ctx;
}

SimSummary Simulation::RunUntil(Tick t) {
  t = std::min(t, end_);
  const bool finishing = t == end_ && loop_.now() < end_;
  SimSummary s = loop_.RunUntil(t);
  if (finishing && options_.record_traces &&
      (flow_rows_.empty() || flow_rows_.back().t != end_)) {
    RecordFlows(end_);
  }
  return s;
}

SimSummary Simulation::Run() { return RunUntil(end_); }

std::vector<HandoverRecord> Simulation::handovers() const { return handover_log_; }

}  // namespace aeronet
