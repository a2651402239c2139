#include "aeronet/transport/congestion.h"

#include <algorithm>
#include <cmath>

namespace aeronet {

void RenoOnAck(CongestionState& cc) {
  if (cc.cwnd < cc.ssthresh) {
    cc.cwnd += 1.0;
  } else {
    cc.cwnd += 1.0 / cc.cwnd;
  }
}

void RenoOnLoss(CongestionState& cc) {
  cc.ssthresh = std::max(cc.cwnd / 2.0, 2.0);
  // The floor applies to ssthresh; a window already below it is not grown.
  cc.cwnd = std::min(cc.cwnd, cc.ssthresh);
}

void RenoOnTimeout(CongestionState& cc) {
  cc.ssthresh = std::max(cc.cwnd / 2.0, 2.0);
  cc.cwnd = 1.0;
}

void RttEstimator::Update(double sample_s) {
  if (!has_sample_) {
    srtt_ = sample_s;
    rttvar_ = sample_s / 2.0;
    has_sample_ = true;
    return;
  }
  rttvar_ = 0.75 * rttvar_ + 0.25 * std::fabs(srtt_ - sample_s);
  srtt_ = 0.875 * srtt_ + 0.125 * sample_s;
}

double RttEstimator::Rto(double min_rto_s, double initial_rto_s) const {
  if (!has_sample_) return initial_rto_s;
  return std::max(srtt_ + 4.0 * rttvar_, min_rto_s);
}

}  // namespace aeronet
