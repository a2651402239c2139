#ifndef AERONET_SIM_TIME_H_
#define AERONET_SIM_TIME_H_

#include <cmath>
#include <cstdint>

namespace aeronet {

// Simulation time is kept as integer ticks of 1 ms so that event ordering
// never depends on floating-point rounding. Seconds appear only at API
// boundaries.
using Tick = std::int64_t;

inline constexpr Tick kTicksPerSecond = 1000;
inline constexpr double kSecondsPerTick = 1.0 / kTicksPerSecond;

inline Tick ToTicks(double seconds) {
  return static_cast<Tick>(std::llround(seconds * kTicksPerSecond));
}

inline constexpr double ToSeconds(Tick t) {
  return static_cast<double>(t) / kTicksPerSecond;
}

}  // namespace aeronet

#endif  // AERONET_SIM_TIME_H_
