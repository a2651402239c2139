#ifndef AERONET_RL_OBSERVATION_H_
#define AERONET_RL_OBSERVATION_H_

#include <optional>
#include <span>
#include <vector>

namespace aeronet {

// Normalisation ranges for the agent state. Stored in checkpoints so a
// policy is always evaluated with the scaling it was trained on.
struct ObservationConfig {
  double sinr_min_db = -10.0;
  double sinr_range_db = 50.0;
  double tau_scale_s = 30.0;
  double handover_scale = 20.0;
};

struct ObservationInputs {
  // Window-averaged SINR per candidate gNB; nullopt while a window is empty.
  std::span<const std::optional<double>> avg_sinr_db;
  std::size_t serving_index = 0;
  double throughput_bps = 0.0;
  double capacity_max_bps = 1.0;
  double since_handover_s = 0.0;
  int handover_count = 0;
};

struct AgentState {
  std::vector<double> sinr;
  std::vector<double> current_onehot;
  double delta_best = 0.0;
  double throughput = 0.0;
  double tau = 0.0;
  double handovers = 0.0;

  std::size_t dimension() const { return 2 * sinr.size() + 4; }
  // [sinr..., onehot..., delta_best, T, tau, H]
  std::vector<double> Flatten() const;
};

inline constexpr int StateDimension(int candidates) { return 2 * candidates + 4; }

double NormalizeSinr(double sinr_db, const ObservationConfig& config = {});

// Throws ColdStart when any candidate has no measurement yet and
// ConfigError when serving_index is out of range.
AgentState Observe(const ObservationInputs& inputs,
                   const ObservationConfig& config = {});

struct RewardSpec {
  double w1 = 0.3;
  double w2 = 0.5;
  double w3 = 0.2;
  double gamma = 0.99;
};

// r = w1 * sinr_target + w2 * throughput - w3 * [handover]
double Reward(const RewardSpec& spec, double sinr_target_norm,
              double throughput_norm, bool handover);

// Greedy action. Ties go to current_index when it is among the maxima,
// otherwise to the lowest index. Pass current_index < 0 for "no current".
int ActGreedy(std::span<const double> q, int current_index);

}  // namespace aeronet

#endif  // AERONET_RL_OBSERVATION_H_
