#ifndef AERONET_RL_NETWORK_H_
#define AERONET_RL_NETWORK_H_

#include <span>
#include <vector>

#include "aeronet/sim/rng.h"

namespace aeronet {

struct NetworkShape {
  int inputs = 0;
  std::vector<int> hidden;
  int actions = 0;

  bool operator==(const NetworkShape&) const = default;
};

// Fully connected dueling Q-network: a rectifier trunk followed by a scalar
// value head and an advantage head, combined as Q = V + A - mean(A).
//
// All weights live in one flat parameter vector. Per trunk layer the layout
// is W (out x in, row-major) then b (out). The heads follow as rows of H
// weights plus one bias: one row for the value head, then one per action.
class QNetwork {
 public:
  QNetwork() = default;
  // Zero-initialised network.
  explicit QNetwork(NetworkShape shape);
  // Weights and biases uniform on +-1/sqrt(fan_in).
  static QNetwork Initialized(NetworkShape shape, RngStream& rng);

  struct Heads {
    double value = 0.0;
    std::vector<double> advantage;
    std::vector<double> q;
  };

  // Throws DimensionMismatch when state.size() != inputs.
  std::vector<double> Forward(std::span<const double> state) const;
  Heads ForwardHeads(std::span<const double> state) const;

  // Adds d(sum_a dq[a] * Q(state, a))/d(params) into grad.
  void AccumulateGradient(std::span<const double> state,
                          std::span<const double> dq,
                          std::span<double> grad) const;

  const NetworkShape& shape() const { return shape_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  // Parameter offsets of the two heads, exposed for tests that craft
  // networks by hand.
  std::size_t value_weight_offset() const { return value_offset_; }
  std::size_t advantage_weight_offset() const { return advantage_offset_; }

 private:
  struct Layer {
    int in = 0;
    int out = 0;
    std::size_t w = 0;  // offset of W
    std::size_t b = 0;  // offset of b
  };
  struct Activations {
    std::vector<std::vector<double>> layers;  // [0] is the input
    double value = 0.0;
    std::vector<double> advantage;
  };

  void Run(std::span<const double> state, Activations& act) const;
  int last_width() const;

  NetworkShape shape_;
  std::vector<Layer> trunk_;
  std::size_t value_offset_ = 0;
  std::size_t advantage_offset_ = 0;
  std::vector<double> params_;
};

double GlobalNorm(std::span<const double> grad);
// Rescales grad so its L2 norm is at most max_norm. Returns the norm before
// clipping.
double ClipGlobalNorm(std::span<double> grad, double max_norm);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // params -= update(grad)
  virtual void Step(std::span<double> params, std::span<const double> grad) = 0;
};

class AdamOptimizer : public Optimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8);
  void Step(std::span<double> params, std::span<const double> grad) override;

 private:
  double lr_, beta1_, beta2_, eps_;
  long step_ = 0;
  std::vector<double> m_, v_;
};

class MomentumOptimizer : public Optimizer {
 public:
  explicit MomentumOptimizer(double lr, double momentum = 0.9);
  void Step(std::span<double> params, std::span<const double> grad) override;

 private:
  double lr_, momentum_;
  std::vector<double> velocity_;
};

}  // namespace aeronet

#endif  // AERONET_RL_NETWORK_H_
