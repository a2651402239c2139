#include "aeronet/rl/observation.h"

#include <algorithm>
#include <cmath>

#include "aeronet/error.h"

namespace aeronet {
namespace {

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::vector<double> AgentState::Flatten() const {
  std::vector<double> out;
  out.reserve(dimension());
  out.insert(out.end(), sinr.begin(), sinr.end());
  out.insert(out.end(), current_onehot.begin(), current_onehot.end());
  out.push_back(delta_best);
  out.push_back(throughput);
  out.push_back(tau);
  out.push_back(handovers);
  return out;
}

double NormalizeSinr(double sinr_db, const ObservationConfig& config) {
  return Clamp01((sinr_db - config.sinr_min_db) / config.sinr_range_db);
}

AgentState Observe(const ObservationInputs& in, const ObservationConfig& config) {
  const std::size_t n = in.avg_sinr_db.size();
  if (n == 0 || in.serving_index >= n) {
    throw ConfigError("serving index outside the candidate set");
  }
  AgentState s;
  s.sinr.resize(n);
  s.current_onehot.assign(n, 0.0);
  s.current_onehot[in.serving_index] = 1.0;
  double best = -INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    if (!in.avg_sinr_db[j]) throw ColdStart("no SINR measurement for a candidate yet");
    s.sinr[j] = NormalizeSinr(*in.avg_sinr_db[j], config);
    best = std::max(best, *in.avg_sinr_db[j]);
  }
  const double serving = *in.avg_sinr_db[in.serving_index];
  s.delta_best = Clamp01((best - serving) / config.sinr_range_db);
  s.throughput = in.capacity_max_bps > 0.0
                     ? Clamp01(in.throughput_bps / in.capacity_max_bps)
                     : 0.0;
  s.tau = std::min(std::max(in.since_handover_s, 0.0) / config.tau_scale_s, 1.0);
  s.handovers = std::min(in.handover_count / config.handover_scale, 1.0);
  return s;
}

double Reward(const RewardSpec& spec, double sinr_target_norm,
              double throughput_norm, bool handover) {
  return spec.w1 * sinr_target_norm + spec.w2 * throughput_norm -
         (handover ? spec.w3 : 0.0);
}

int ActGreedy(std::span<const double> q, int current_index) {
  if (q.empty()) throw ConfigError("empty Q-vector");
  int best = 0;
  for (int a = 1; a < static_cast<int>(q.size()); ++a) {
    if (q[a] > q[best]) best = a;
  }
  if (current_index >= 0 && current_index < static_cast<int>(q.size()) &&
      q[current_index] == q[best]) {
    return current_index;
  }
  return best;
}

}  // namespace aeronet
