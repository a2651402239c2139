#ifndef AERONET_SIM_EVENT_LOOP_H_
#define AERONET_SIM_EVENT_LOOP_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "aeronet/sim/time.h"

namespace aeronet {

enum class EventKind : std::uint8_t {
  kMobilityUpdate,
  kChannelSample,
  kTrafficTick,
  kMeasurementReport,
  kHandoverDecision,
  kFlowTimer,
};
inline constexpr std::size_t kEventKindCount = 6;

std::string_view EventKindName(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

struct SimSummary {
  Tick end = 0;
  std::uint64_t executed = 0;
  std::array<std::uint64_t, kEventKindCount> by_kind{};

  std::uint64_t count(EventKind kind) const {
    return by_kind[static_cast<std::size_t>(kind)];
  }
};

// Single-threaded discrete-event loop. Events fire in (time, sequence)
// order, so events scheduled for the same tick run in insertion order.
class EventLoop {
 public:
  using Callback = std::function<void()>;

  EventLoop() = default;
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;
  EventLoop(EventLoop&&) = default;
  EventLoop& operator=(EventLoop&&) = default;

  // Throws PastEvent when fire < now().
  EventHandle Schedule(Tick fire, EventKind kind, std::uint32_t target,
                       Callback cb);
  EventHandle ScheduleSeconds(double fire_s, EventKind kind,
                              std::uint32_t target, Callback cb) {
    return Schedule(ToTicks(fire_s), kind, target, std::move(cb));
  }

  // Fires cb at start, start + period, ... until the loop stops being run.
  // Each occurrence is an ordinary event (counted and cancellable only as
  // a series via the returned flag being cleared).
  void SchedulePeriodic(Tick start, Tick period, EventKind kind,
                        std::uint32_t target, std::function<void(Tick)> cb);

  // Returns false if the handle already fired or was cancelled.
  bool Cancel(EventHandle handle);

  // Executes every event with fire time <= end, then sets now() = end.
  SimSummary RunUntil(Tick end);
  SimSummary RunUntilSeconds(double end_s) { return RunUntil(ToTicks(end_s)); }

  Tick now() const { return now_; }
  double now_seconds() const { return ToSeconds(now_); }

  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t executed_count() const { return executed_; }
  std::uint64_t cancelled_count() const { return cancelled_; }
  std::uint64_t pending_count() const { return heap_.size() - tombstones_.size(); }

 private:
  struct Entry {
    Tick fire;
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t target;
    Callback cb;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.fire != b.fire ? a.fire > b.fire : a.seq > b.seq;
    }
  };

  std::vector<Entry> heap_;
  std::unordered_set<std::uint64_t> tombstones_;
  std::unordered_set<std::uint64_t> live_;
  Tick now_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t scheduled_ = 0;
  std::uint64_t executed_ = 0;
  std::uint64_t cancelled_ = 0;
};

}  // namespace aeronet

#endif  // AERONET_SIM_EVENT_LOOP_H_
