#include "aeronet/transport/flow.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "aeronet/error.h"

namespace aeronet {
namespace {

constexpr int kMaxRtoBackoff = 6;
constexpr double kMaxRtoS = 60.0;
constexpr double kQuicMinimumWindow = 2.0;

}  // namespace

std::string_view ProtocolName(Protocol p) {
  switch (p) {
    case Protocol::kUdp: return "UDP";
    case Protocol::kTcp: return "TCP";
    case Protocol::kQuic: return "QUIC";
    case Protocol::kMpQuic: return "MPQUIC";
  }
  return "?";
}

Protocol ParseProtocol(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "udp") return Protocol::kUdp;
  if (lower == "tcp") return Protocol::kTcp;
  if (lower == "quic") return Protocol::kQuic;
  if (lower == "mpquic" || lower == "mp-quic") return Protocol::kMpQuic;
  throw ConfigError("unknown transport '" + std::string(name) +
                    "' (udp | tcp | quic | mpquic)");
}

CounterHistory::CounterHistory(std::size_t horizon_ticks)
    : ring_(std::max<std::size_t>(horizon_ticks, 2), 0.0) {}

void CounterHistory::Record(Tick t, double cumulative) {
  const auto size = static_cast<Tick>(ring_.size());
  if (last_ < 0) {
    first_ = t;
  } else if (t > last_ + 1) {
    const double prev = ring_[last_ % size];
    const Tick from = std::max(last_ + 1, t - size);
    for (Tick k = from; k < t; ++k) ring_[k % size] = prev;
  } else if (t <= last_) {
    ring_[t % size] = cumulative;
    return;
  }
  ring_[t % size] = cumulative;
  last_ = t;
}

double CounterHistory::At(Tick t) const {
  if (last_ < 0 || t < first_) return 0.0;
  const auto size = static_cast<Tick>(ring_.size());
  if (t > last_) t = last_;
  const Tick oldest = std::max(first_, last_ - size + 1);
  if (t < oldest) t = oldest;
  return ring_[t % size];
}

std::optional<std::size_t> MinRttPath(std::span<const SchedulerPathView> paths) {
  std::optional<std::size_t> best;
  double best_rtt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (static_cast<double>(p.in_flight) + 1.0 > p.cwnd) continue;
    const double rtt = p.srtt_s > 0.0 ? p.srtt_s : kUnprobedPathRttS;
    if (rtt < best_rtt) {
      best_rtt = rtt;
      best = i;
    }
  }
  return best;
}

Flow::Flow(std::uint32_t id, Protocol protocol, TrafficSource source,
           std::vector<FlowPathBinding> paths, const LinkConfig& config, Tick start)
    : id_(id), protocol_(protocol), source_(source), config_(config), start_(start) {
  if (paths.empty()) throw ConfigError("flow " + std::to_string(id) + " has no path");
  if (protocol != Protocol::kMpQuic && paths.size() != 1) {
    throw ConfigError("only MP-QUIC flows may use more than one path");
  }
  if (protocol == Protocol::kUdp && source.kind != TrafficSource::Kind::kCbr) {
    throw ConfigError("UDP flows need a constant-bit-rate source");
  }
  one_way_guess_ = std::max<Tick>(1, ToTicks(config.core_latency_s));
  paths_.resize(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Path& p = paths_[i];
    p.binding = paths[i];
    p.path_id = static_cast<std::uint32_t>(i);
    p.cc.cwnd = config.initial_window_packets;
    p.last_progress = start;
  }
}

bool Flow::HasHeadroom(const Path& p) const {
  return static_cast<double>(p.in_flight) + 1.0 <= p.cc.cwnd;
}

void Flow::Enqueue(Path& p, Tick now) {
  ++p.counters.sent;
  if (windowed()) {
    if (p.in_flight == 0) p.last_progress = now;
    ++p.in_flight;
  }
  if (p.queued >= config_.tx_queue_packets) {
    ++p.counters.queue_drops;
    if (windowed()) {
      // The sender learns about a local drop one base RTT later, like any
      // other loss.
      if (!p.batches.empty() && p.batches.back().local_drop && p.batches.back().sent == now) {
        ++p.batches.back().lost;
      } else {
        p.batches.push_back(Batch{now, now, now + 2 * one_way_guess_, 0, 1, true, false, true});
      }
    }
    return;
  }
  if (!p.queue.empty() && p.queue.back().enqueued == now) {
    ++p.queue.back().count;
  } else {
    p.queue.push_back(QueuedChunk{now, 1});
  }
  ++p.queued;
  ++p.counters.queued;
}

void Flow::Send(Tick now) {
  if (now < start_) return;
  const bool bulk = source_.kind == TrafficSource::Kind::kBulk;
  if (!bulk) {
    app_credit_ += source_.rate_bps * kSecondsPerTick / config_.packet_bits();
    const auto n = static_cast<std::int64_t>(std::floor(app_credit_));
    app_credit_ -= static_cast<double>(n);
    if (protocol_ == Protocol::kUdp) {
      for (std::int64_t i = 0; i < n; ++i) Enqueue(paths_[0], now);
      return;
    }
    app_pending_ = std::min<std::int64_t>(app_pending_ + n, 4 * config_.tx_queue_packets);
  }
  auto has_data = [&] { return bulk || app_pending_ > 0; };

  if (protocol_ != Protocol::kMpQuic) {
    Path& p = paths_[0];
    while (has_data() && HasHeadroom(p)) {
      Enqueue(p, now);
      if (!bulk) --app_pending_;
    }
    return;
  }

  std::vector<SchedulerPathView> views(paths_.size());
  while (has_data()) {
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      const Path& p = paths_[i];
      views[i] = {p.rtt.has_sample() ? p.rtt.srtt() : 0.0, p.in_flight, p.cc.cwnd};
    }
    const auto pick = MinRttPath(views);
    if (!pick) break;
    Enqueue(paths_[*pick], now);
    if (!bulk) --app_pending_;
  }
}

int Flow::ServePath(std::size_t path, int max_packets, double loss_p, Tick now,
                    Tick one_way_ticks, RngStream& rng) {
  Path& p = paths_[path];
  const auto n = static_cast<std::int32_t>(std::min<std::int64_t>(max_packets, p.queued));
  if (n <= 0) return 0;
  std::int32_t lost = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    if (rng.Bernoulli(loss_p)) ++lost;
  }
  const Tick sent = p.queue.front().enqueued;
  std::int32_t remaining = n;
  while (remaining > 0) {
    QueuedChunk& c = p.queue.front();
    const std::int32_t take = std::min(remaining, c.count);
    c.count -= take;
    remaining -= take;
    if (c.count == 0) p.queue.pop_front();
  }
  p.queued -= n;
  p.counters.queued -= n;
  p.counters.lost += lost;
  p.counters.on_air += n - lost;
  one_way_guess_ = one_way_ticks;

  const Tick arrive = now + one_way_ticks;
  if (!p.batches.empty()) {
    Batch& back = p.batches.back();
    if (!back.local_drop && !back.flushed && !back.arrived && back.arrive == arrive) {
      back.delivered += n - lost;
      back.lost += lost;
      return n;
    }
  }
  p.batches.push_back(Batch{sent, arrive, arrive + one_way_ticks, n - lost, lost});
  return n;
}

void Flow::Receive(Tick now) {
  for (Path& p : paths_) {
    for (Batch& b : p.batches) {
      if (b.arrived) continue;
      if (b.arrive > now) break;
      b.arrived = true;
      if (!b.flushed) {
        p.counters.delivered += b.delivered;
        p.counters.on_air -= b.delivered;
      }
    }
    if (!windowed()) {
      while (!p.batches.empty() && p.batches.front().arrived) p.batches.pop_front();
      continue;
    }

    while (!p.batches.empty() && p.batches.front().arrived && p.batches.front().ack <= now) {
      const Batch b = p.batches.front();
      p.batches.pop_front();
      if (b.flushed) {
        // TCP: packets vanished with the old cell; no ACK ever comes back.
        p.silent_outstanding += b.delivered + b.lost;
        continue;
      }
      if (b.local_drop) {
        p.in_flight -= b.lost;
        OnLossEvent(p, now);
        continue;
      }
      p.in_flight -= b.delivered + b.lost;
      p.acked += b.delivered;
      if (b.delivered > 0) {
        const double sample = ToSeconds(now - b.sent);
        p.rtt.Update(sample);
        p.rtt_sum_s += sample;
        ++p.rtt_samples;
        if (p.silent_outstanding == 0) {
          if (now >= p.recovery_until) {
            for (std::int32_t i = 0; i < b.delivered; ++i) RenoOnAck(p.cc);
          }
          p.last_progress = now;
          p.rto_backoff = 0;
        }
      }
      if (b.lost > 0) OnLossEvent(p, now);
    }
    p.in_flight = std::max<std::int64_t>(p.in_flight, 0);

    if (p.in_flight > 0) {
      const double rto = std::min(
          p.rtt.Rto(config_.min_rto_s, config_.initial_rto_s) * std::ldexp(1.0, p.rto_backoff),
          kMaxRtoS);
      if (now - p.last_progress >= ToTicks(rto)) OnTimeout(p, now);
    }
  }
}

void Flow::OnLossEvent(Path& p, Tick now) {
  if (p.silent_outstanding > 0 || now < p.recovery_until) return;
  RenoOnLoss(p.cc);
  const double rtt = p.rtt.has_sample() ? p.rtt.srtt() : ToSeconds(2 * one_way_guess_);
  p.recovery_until = now + std::max<Tick>(1, ToTicks(rtt));
}

void Flow::OnTimeout(Path& p, Tick now) {
  p.in_flight = std::max<std::int64_t>(p.in_flight - p.silent_outstanding, 0);
  p.silent_outstanding = 0;
  if (protocol_ == Protocol::kTcp) {
    RenoOnTimeout(p.cc);
  } else {
    p.cc.ssthresh = std::max(p.cc.cwnd / 2.0, kQuicMinimumWindow);
    p.cc.cwnd = kQuicMinimumWindow;
  }
  p.rto_backoff = std::min(p.rto_backoff + 1, kMaxRtoBackoff);
  p.last_progress = now;
  p.recovery_until = now;
}

void Flow::OnHandover(std::size_t path, Tick now) {
  Path& p = paths_[path];
  for (Batch& b : p.batches) {
    if (b.arrived || b.local_drop || b.flushed) continue;
    b.flushed = true;
    p.counters.lost += b.delivered;
    p.counters.on_air -= b.delivered;
  }
  if (protocol_ == Protocol::kQuic || protocol_ == Protocol::kMpQuic) QuicMigrate(path, now);
}

void Flow::QuicMigrate(std::size_t path, Tick now) {
  if (protocol_ != Protocol::kQuic && protocol_ != Protocol::kMpQuic) {
    throw Error("connection migration needs a QUIC flow");
  }
  Path& p = paths_[path];
  for (Batch& b : p.batches) {
    if (b.arrived || b.local_drop || b.flushed) continue;
    b.flushed = true;
    p.counters.lost += b.delivered;
    p.counters.on_air -= b.delivered;
  }
  std::int64_t declared = 0;
  std::erase_if(p.batches, [&](const Batch& b) {
    if (!b.flushed) return false;
    declared += b.delivered + b.lost;
    return true;
  });
  p.in_flight = std::max<std::int64_t>(p.in_flight - declared, 0);
  p.cc = CongestionState{static_cast<double>(config_.initial_window_packets),
                         std::numeric_limits<double>::infinity()};
  p.rtt.Reset();
  p.recovery_until = -1;
  p.rto_backoff = 0;
  p.silent_outstanding = 0;
  p.last_progress = now;
}

void Flow::EndTick(Tick now) {
  for (Path& p : paths_) {
    p.delivered_hist.Record(now, static_cast<double>(p.counters.delivered));
    p.lost_hist.Record(now, static_cast<double>(p.counters.lost));
    p.rtt_sum_hist.Record(now, p.rtt_sum_s);
    p.rtt_count_hist.Record(now, static_cast<double>(p.rtt_samples));
  }
}

PathState Flow::PathSnapshot(std::size_t path) const {
  const Path& p = paths_[path];
  PathState s;
  s.path_id = p.path_id;
  s.interface_group = p.binding.interface_group;
  s.cwnd = p.cc.cwnd;
  s.ssthresh = p.cc.ssthresh;
  s.srtt_s = p.rtt.srtt();
  s.rttvar_s = p.rtt.rttvar();
  s.in_flight = windowed() ? p.in_flight : p.queued + p.counters.on_air;
  return s;
}

FlowState Flow::Snapshot() const {
  FlowState s;
  s.flow_id = id_;
  s.protocol = protocol_;
  for (std::size_t i = 0; i < paths_.size(); ++i) s.paths.push_back(PathSnapshot(i));
  s.cwnd = s.paths[0].cwnd;
  s.ssthresh = s.paths[0].ssthresh;
  s.srtt_s = s.paths[0].srtt_s;
  s.rttvar_s = s.paths[0].rttvar_s;
  for (const auto& p : s.paths) s.in_flight += p.in_flight;
  const PacketCounters c = Counters();
  for (const Path& p : paths_) s.bytes_acked += p.acked * config_.packet_bytes;
  s.losses = c.lost + c.queue_drops;
  return s;
}

PacketCounters Flow::PathCounters(std::size_t path) const { return paths_[path].counters; }

PacketCounters Flow::Counters() const {
  PacketCounters total;
  for (const Path& p : paths_) {
    total.sent += p.counters.sent;
    total.delivered += p.counters.delivered;
    total.lost += p.counters.lost;
    total.queue_drops += p.counters.queue_drops;
    total.queued += p.counters.queued;
    total.on_air += p.counters.on_air;
  }
  return total;
}

TransportStats Flow::StatsOver(std::span<const Path* const> paths, Tick now,
                               double window_s) const {
  TransportStats s;
  s.window_s = window_s;
  const Tick from = now - std::max<Tick>(1, ToTicks(window_s));
  double delivered = 0.0, lost = 0.0, rtt_sum = 0.0, rtt_n = 0.0;
  for (const Path* p : paths) {
    delivered += p->delivered_hist.At(now) - p->delivered_hist.At(from);
    lost += p->lost_hist.At(now) - p->lost_hist.At(from);
    rtt_sum += p->rtt_sum_hist.At(now) - p->rtt_sum_hist.At(from);
    rtt_n += p->rtt_count_hist.At(now) - p->rtt_count_hist.At(from);
  }
  s.throughput_bps = window_s > 0.0 ? delivered * config_.packet_bits() / window_s : 0.0;
  s.loss_rate = (delivered + lost) > 0.0 ? lost / (delivered + lost) : 0.0;
  s.mean_rtt_s = rtt_n > 0.0 ? rtt_sum / rtt_n : 0.0;
  return s;
}

TransportStats Flow::Stats(Tick now, double window_s) const {
  std::vector<const Path*> all;
  for (const Path& p : paths_) all.push_back(&p);
  return StatsOver(all, now, window_s);
}

TransportStats Flow::PathStats(std::size_t path, Tick now, double window_s) const {
  const Path* p = &paths_[path];
  return StatsOver(std::span<const Path* const>(&p, 1), now, window_s);
}

}  // namespace aeronet
