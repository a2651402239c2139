#include "support/toy_mdp.h"

#include <algorithm>
#include <cmath>

namespace aeronet::testing {

TabularMdp TwoStateMdp() {
  TabularMdp m;
  m.next = {{0, 1}, {1, 0}};
  m.reward = {{0.5, 0.0}, {1.0, 0.0}};
  return m;
}

std::vector<std::vector<double>> ValueIteration(const TabularMdp& mdp, double gamma,
                                                double tol) {
  std::vector<double> v(mdp.states(), 0.0);
  std::vector<std::vector<double>> q(mdp.states(), std::vector<double>(mdp.actions(), 0.0));
  for (;;) {
    double delta = 0.0;
    for (int s = 0; s < mdp.states(); ++s) {
      for (int a = 0; a < mdp.actions(); ++a) {
        q[s][a] = mdp.reward[s][a] + gamma * v[mdp.next[s][a]];
      }
      const double best = *std::max_element(q[s].begin(), q[s].end());
      delta = std::max(delta, std::abs(best - v[s]));
      v[s] = best;
    }
    if (delta < tol) break;
  }
  return q;
}

std::vector<int> GreedyPolicy(const std::vector<std::vector<double>>& q) {
  std::vector<int> pi;
  for (const auto& row : q) {
    pi.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return pi;
}

TabularEnvironment::TabularEnvironment(TabularMdp mdp, int horizon)
    : mdp_(std::move(mdp)), horizon_(horizon) {}

std::vector<double> TabularEnvironment::Encode(int s) const {
  std::vector<double> x(mdp_.states(), 0.0);
  x[s] = 1.0;
  return x;
}

std::vector<double> TabularEnvironment::Reset(int episode) {
  state_ = episode % mdp_.states();
  steps_ = 0;
  return Encode(state_);
}

Environment::Step TabularEnvironment::Act(int action) {
  Step step;
  step.reward = mdp_.reward[state_][action];
  state_ = mdp_.next[state_][action];
  ++steps_;
  step.next_state = Encode(state_);
  step.truncated = steps_ >= horizon_;
  return step;
}

}  // namespace aeronet::testing
