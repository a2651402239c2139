#ifndef AERONET_TRANSPORT_LINK_H_
#define AERONET_TRANSPORT_LINK_H_

namespace aeronet {

// Abstract radio link parameters. The rate mapping is a truncated Shannon
// bound scaled by a protocol overhead factor, with a spectral-efficiency cap
// corresponding to 256-QAM.
struct LinkConfig {
  double overhead_factor = 0.6;
  double max_spectral_efficiency = 7.4;  // bit/s/Hz
  double sinr_floor_db = -10.0;

  // Step packet-error model: loss_i applies for SINR in [edge_i, edge_{i+1}).
  double loss_edges_db[3] = {-5.0, 0.0, 5.0};
  double loss_levels[4] = {0.5, 0.05, 0.005, 0.0};

  int packet_bytes = 1200;
  double core_latency_s = 0.010;
  double interruption_s = 0.050;
  int tx_queue_packets = 256;
  int initial_window_packets = 10;
  double min_rto_s = 0.2;
  double initial_rto_s = 1.0;

  double packet_bits() const { return 8.0 * packet_bytes; }
  double MaxRateBps(double bandwidth_mhz) const {
    return overhead_factor * bandwidth_mhz * 1e6 * max_spectral_efficiency;
  }
};

struct LinkCapacity {
  double rate_bps = 0.0;
  double per_packet_loss = 0.0;
};

double PacketLossProbability(double sinr_db, const LinkConfig& config = {});

// rate = 0 below the SINR floor, otherwise
// min(k * BW * log2(1 + sinr), k * BW * se_max).
LinkCapacity Capacity(double sinr_db, double bandwidth_mhz,
                      const LinkConfig& config = {});

}  // namespace aeronet

#endif  // AERONET_TRANSPORT_LINK_H_
