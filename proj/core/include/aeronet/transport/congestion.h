#ifndef AERONET_TRANSPORT_CONGESTION_H_
#define AERONET_TRANSPORT_CONGESTION_H_

#include <limits>

namespace aeronet {

// Window-based congestion state in packets (Reno / NewReno style).
struct CongestionState {
  double cwnd = 10.0;
  double ssthresh = std::numeric_limits<double>::infinity();
};

// Slow start below ssthresh (+1 per ACK), congestion avoidance above it
// (+1/cwnd per ACK).
void RenoOnAck(CongestionState& cc);
// Multiplicative decrease: ssthresh = max(cwnd/2, 2), cwnd = min(cwnd, ssthresh).
void RenoOnLoss(CongestionState& cc);
// Retransmission timeout: ssthresh = max(cwnd/2, 2), cwnd = 1.
void RenoOnTimeout(CongestionState& cc);

// RFC 6298 smoothed RTT / variance estimator, in seconds.
class RttEstimator {
 public:
  void Update(double sample_s);
  void Reset() { *this = RttEstimator{}; }

  bool has_sample() const { return has_sample_; }
  double srtt() const { return srtt_; }
  double rttvar() const { return rttvar_; }
  double Rto(double min_rto_s, double initial_rto_s) const;

 private:
  bool has_sample_ = false;
  double srtt_ = 0.0;
  double rttvar_ = 0.0;
};

}  // namespace aeronet

#endif  // AERONET_TRANSPORT_CONGESTION_H_
