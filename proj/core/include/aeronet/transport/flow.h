#ifndef AERONET_TRANSPORT_FLOW_H_
#define AERONET_TRANSPORT_FLOW_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aeronet/sim/rng.h"
#include "aeronet/sim/time.h"
#include "aeronet/transport/congestion.h"
#include "aeronet/transport/link.h"

namespace aeronet {

enum class Protocol { kUdp, kTcp, kQuic, kMpQuic };

std::string_view ProtocolName(Protocol p);
// Accepts udp | tcp | quic | mpquic (case-insensitive). Throws ConfigError.
Protocol ParseProtocol(std::string_view name);

struct TrafficSource {
  enum class Kind { kBulk, kCbr };
  Kind kind = Kind::kBulk;
  double rate_bps = 0.0;  // kCbr only
};

struct PathState {
  std::uint32_t path_id = 0;
  int interface_group = 0;
  double cwnd = 0.0;
  double ssthresh = 0.0;
  double srtt_s = 0.0;
  double rttvar_s = 0.0;
  std::int64_t in_flight = 0;
};

// Read-only snapshot of a flow. For multipath flows the scalar congestion
// fields mirror path 0; per-path detail is in `paths`.
struct FlowState {
  std::uint32_t flow_id = 0;
  Protocol protocol = Protocol::kUdp;
  double cwnd = 0.0;
  double ssthresh = 0.0;
  double srtt_s = 0.0;
  double rttvar_s = 0.0;
  std::int64_t in_flight = 0;
  std::vector<PathState> paths;
  // Bytes whose ACK has reached the sender; always 0 for UDP.
  std::int64_t bytes_acked = 0;
  std::int64_t losses = 0;
};

struct TransportStats {
  double window_s = 0.0;
  double throughput_bps = 0.0;
  double loss_rate = 0.0;
  double mean_rtt_s = 0.0;
};

// Packet accounting from the simulator's (omniscient) point of view.
// Conservation: sent == delivered + lost + queue_drops + queued + on_air.
struct PacketCounters {
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t lost = 0;         // radio loss + handover flush
  std::int64_t queue_drops = 0;  // transmit buffer overflow
  std::int64_t queued = 0;
  std::int64_t on_air = 0;
};

// Cumulative counter sampled once per tick, kept for a bounded horizon so
// trailing-window differences are O(1).
class CounterHistory {
 public:
  explicit CounterHistory(std::size_t horizon_ticks = 12 * kTicksPerSecond);

  void Record(Tick t, double cumulative);
  // Cumulative value at the end of tick t; 0 before the first record and
  // the oldest retained value once t falls off the horizon.
  double At(Tick t) const;

 private:
  std::vector<double> ring_;
  Tick first_ = 0;
  Tick last_ = -1;
};

// View of one path used by the min-RTT scheduler.
struct SchedulerPathView {
  double srtt_s = 0.0;  // <= 0 means no sample yet
  std::int64_t in_flight = 0;
  double cwnd = 0.0;
};

// RTT assumed for a path that has no sample yet.
inline constexpr double kUnprobedPathRttS = 0.1;

// Lowest-srtt path with congestion-window headroom (ties to the lower
// index); nullopt when every path is full.
std::optional<std::size_t> MinRttPath(std::span<const SchedulerPathView> paths);

struct FlowPathBinding {
  std::size_t interface_index = 0;  // engine-level interface slot
  int interface_group = 0;
};

// One transport connection from a UE to the server. UDP, TCP and QUIC use a
// single path; MP-QUIC runs one path per bound interface.
//
// Per tick the engine calls Receive(), Send(), ServePath() for each path
// whose interface has transmit capacity, then EndTick().
class Flow {
 public:
  Flow(std::uint32_t id, Protocol protocol, TrafficSource source,
       std::vector<FlowPathBinding> paths, const LinkConfig& config,
       Tick start = 0);

  std::uint32_t id() const { return id_; }
  Protocol protocol() const { return protocol_; }
  std::size_t path_count() const { return paths_.size(); }
  const FlowPathBinding& binding(std::size_t path) const { return paths_[path].binding; }

  // Processes server arrivals, ACKs and retransmission timers due at now.
  void Receive(Tick now);
  // Generates application data and places it into path transmit queues.
  void Send(Tick now);
  // Transmits up to max_packets from the path's queue over the radio,
  // dropping each with probability loss_p. Returns packets transmitted.
  int ServePath(std::size_t path, int max_packets, double loss_p, Tick now,
                Tick one_way_ticks, RngStream& rng);
  void EndTick(Tick now);

  std::int64_t queued(std::size_t path) const { return paths_[path].queued; }

  // Handover on the path's interface. TCP loses the packets in transit
  // without being told (recovery by RTO); QUIC and MP-QUIC migrate.
  void OnHandover(std::size_t path, Tick now);
  // QUIC connection migration: connection survives, congestion controller
  // and RTT estimator restart, in-transit packets are declared lost.
  void QuicMigrate(std::size_t path, Tick now);

  FlowState Snapshot() const;
  PathState PathSnapshot(std::size_t path) const;
  PacketCounters Counters() const;
  PacketCounters PathCounters(std::size_t path) const;

  TransportStats Stats(Tick now, double window_s) const;
  TransportStats PathStats(std::size_t path, Tick now, double window_s) const;

  // Congestion-control hooks, exposed for tests of the Reno rules.
  CongestionState& congestion(std::size_t path) { return paths_[path].cc; }

 private:
  struct QueuedChunk {
    Tick enqueued;
    std::int32_t count;
  };
  struct Batch {
    Tick sent;
    Tick arrive;
    Tick ack;
    std::int32_t delivered;
    std::int32_t lost;
    bool arrived = false;
    bool flushed = false;
    bool local_drop = false;
  };
  struct Path {
    FlowPathBinding binding;
    std::uint32_t path_id = 0;
    CongestionState cc;
    RttEstimator rtt;
    std::int64_t in_flight = 0;
    std::int64_t acked = 0;
    std::int64_t silent_outstanding = 0;
    Tick recovery_until = -1;
    Tick last_progress = 0;
    int rto_backoff = 0;
    std::deque<QueuedChunk> queue;
    std::deque<Batch> batches;
    std::int64_t queued = 0;
    PacketCounters counters;
    double rtt_sum_s = 0.0;
    std::int64_t rtt_samples = 0;
    CounterHistory delivered_hist;
    CounterHistory lost_hist;
    CounterHistory rtt_sum_hist;
    CounterHistory rtt_count_hist;
  };

  bool windowed() const { return protocol_ != Protocol::kUdp; }
  bool HasHeadroom(const Path& p) const;
  void Enqueue(Path& p, Tick now);
  void OnLossEvent(Path& p, Tick now);
  void OnTimeout(Path& p, Tick now);
  TransportStats StatsOver(std::span<const Path* const> paths, Tick now,
                           double window_s) const;

  std::uint32_t id_;
  Protocol protocol_;
  TrafficSource source_;
  LinkConfig config_;
  Tick start_;
  Tick one_way_guess_ = 10;
  double app_credit_ = 0.0;
  std::int64_t app_pending_ = 0;
  std::vector<Path> paths_;
};

}  // namespace aeronet

#endif  // AERONET_TRANSPORT_FLOW_H_
