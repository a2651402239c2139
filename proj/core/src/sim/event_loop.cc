#include "aeronet/sim/event_loop.h"

#include <algorithm>
#include <memory>
#include <string>

#include "aeronet/error.h"

namespace aeronet {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kMobilityUpdate: return "MobilityUpdate";
    case EventKind::kChannelSample: return "ChannelSample";
    case EventKind::kTrafficTick: return "TrafficTick";
    case EventKind::kMeasurementReport: return "MeasurementReport";
    case EventKind::kHandoverDecision: return "HandoverDecision";
    case EventKind::kFlowTimer: return "FlowTimer";
  }
  return "Unknown";
}

EventHandle EventLoop::Schedule(Tick fire, EventKind kind,
                                std::uint32_t target, Callback cb) {
  if (fire < now_) {
    throw PastEvent("event scheduled at tick " + std::to_string(fire) +
                    " but clock is at " + std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{fire, seq, kind, target, std::move(cb)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  live_.insert(seq);
  ++scheduled_;
  return EventHandle{seq};
}

void EventLoop::SchedulePeriodic(Tick start, Tick period, EventKind kind,
                                 std::uint32_t target,
                                 std::function<void(Tick)> cb) {
  auto shared = std::make_shared<std::function<void(Tick)>>(std::move(cb));
  // The occurrence reschedules its successor before running the body so a
  // body that schedules same-tick work still sees a consistent queue.
  auto fire = std::make_shared<std::function<void(Tick)>>();
  *fire = [this, period, kind, target, shared, weak = std::weak_ptr(fire)](Tick at) {
    auto self = weak.lock();
    Schedule(at + period, kind, target, [self, at, period] { (*self)(at + period); });
    (*shared)(at);
  };
  Schedule(start, kind, target, [fire, start] { (*fire)(start); });
}

bool EventLoop::Cancel(EventHandle handle) {
  if (!handle.valid() || live_.erase(handle.seq) == 0) return false;
  tombstones_.insert(handle.seq);
  ++cancelled_;
  return true;
}

SimSummary EventLoop::RunUntil(Tick end) {
  SimSummary summary;
  if (end < now_) end = now_;
  while (!heap_.empty() && heap_.front().fire <= end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    if (tombstones_.erase(e.seq) > 0) continue;
    live_.erase(e.seq);
    now_ = e.fire;
    ++executed_;
    ++summary.executed;
    ++summary.by_kind[static_cast<std::size_t>(e.kind)];
    e.cb();
  }
  now_ = end;
  summary.end = end;
  return summary;
}

}  // namespace aeronet
