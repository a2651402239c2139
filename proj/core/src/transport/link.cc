#include "aeronet/transport/link.h"

#include <algorithm>
#include <cmath>

namespace aeronet {

double PacketLossProbability(double sinr_db, const LinkConfig& config) {
  if (sinr_db < config.sinr_floor_db) return 1.0;
  for (int i = 0; i < 3; ++i) {
    if (sinr_db < config.loss_edges_db[i]) return config.loss_levels[i];
  }
  return config.loss_levels[3];
}

LinkCapacity Capacity(double sinr_db, double bandwidth_mhz, const LinkConfig& config) {
  LinkCapacity c;
  c.per_packet_loss = PacketLossProbability(sinr_db, config);
  if (sinr_db < config.sinr_floor_db || bandwidth_mhz <= 0.0) return c;
  const double bw_hz = bandwidth_mhz * 1e6;
  const double sinr = std::pow(10.0, sinr_db / 10.0);
  c.rate_bps = std::min(config.overhead_factor * bw_hz * std::log2(1.0 + sinr),
                        config.MaxRateBps(bandwidth_mhz));
  return c;
}

}  // namespace aeronet
