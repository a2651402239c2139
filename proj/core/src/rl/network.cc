#include "aeronet/rl/network.h"

#include <cmath>
#include <string>

#include "aeronet/error.h"

namespace aeronet {

QNetwork::QNetwork(NetworkShape shape) : shape_(std::move(shape)) {
  if (shape_.inputs <= 0 || shape_.actions <= 0) {
    throw ConfigError("network needs at least one input and one action");
  }
  std::size_t offset = 0;
  int in = shape_.inputs;
  for (int width : shape_.hidden) {
    if (width <= 0) throw ConfigError("hidden layer width must be positive");
    Layer layer{in, width, offset, offset + static_cast<std::size_t>(in) * width};
    offset = layer.b + width;
    trunk_.push_back(layer);
    in = width;
  }
  value_offset_ = offset;
  offset += in + 1;
  advantage_offset_ = offset;
  offset += static_cast<std::size_t>(shape_.actions) * (in + 1);
  params_.assign(offset, 0.0);
}

QNetwork QNetwork::Initialized(NetworkShape shape, RngStream& rng) {
  QNetwork net(std::move(shape));
  for (const Layer& layer : net.trunk_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (std::size_t i = layer.w; i < layer.b + layer.out; ++i) {
      net.params_[i] = rng.Uniform(-bound, bound);
    }
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(net.last_width()));
  for (std::size_t i = net.value_offset_; i < net.params_.size(); ++i) {
    net.params_[i] = rng.Uniform(-bound, bound);
  }
  return net;
}

int QNetwork::last_width() const {
  return trunk_.empty() ? shape_.inputs : trunk_.back().out;
}

void QNetwork::Run(std::span<const double> state, Activations& act) const {
  if (state.size() != static_cast<std::size_t>(shape_.inputs)) {
    throw DimensionMismatch("state has " + std::to_string(state.size()) +
                            " components, network expects " +
                            std::to_string(shape_.inputs));
  }
  act.layers.resize(trunk_.size() + 1);
  act.layers[0].assign(state.begin(), state.end());
  for (std::size_t l = 0; l < trunk_.size(); ++l) {
    const Layer& layer = trunk_[l];
    const std::vector<double>& x = act.layers[l];
    std::vector<double>& y = act.layers[l + 1];
    y.resize(layer.out);
    for (int o = 0; o < layer.out; ++o) {
      const double* w = &params_[layer.w + static_cast<std::size_t>(o) * layer.in];
      double sum = params_[layer.b + o];
      for (int i = 0; i < layer.in; ++i) sum += w[i] * x[i];
      y[o] = sum > 0.0 ? sum : 0.0;
    }
  }
  const std::vector<double>& h = act.layers.back();
  const int width = last_width();
  double v = params_[value_offset_ + width];
  for (int i = 0; i < width; ++i) v += params_[value_offset_ + i] * h[i];
  act.value = v;
  act.advantage.resize(shape_.actions);
  for (int a = 0; a < shape_.actions; ++a) {
    const std::size_t row = advantage_offset_ + static_cast<std::size_t>(a) * (width + 1);
    double sum = params_[row + width];
    for (int i = 0; i < width; ++i) sum += params_[row + i] * h[i];
    act.advantage[a] = sum;
  }
}

QNetwork::Heads QNetwork::ForwardHeads(std::span<const double> state) const {
  Activations act;
  Run(state, act);
  Heads heads;
  heads.value = act.value;
  heads.advantage = act.advantage;
  double mean = 0.0;
  for (double a : act.advantage) mean += a;
  mean /= static_cast<double>(act.advantage.size());
  heads.q.resize(act.advantage.size());
  for (std::size_t a = 0; a < heads.q.size(); ++a) {
    heads.q[a] = act.value + act.advantage[a] - mean;
  }
  return heads;
}

std::vector<double> QNetwork::Forward(std::span<const double> state) const {
  return ForwardHeads(state).q;
}

void QNetwork::AccumulateGradient(std::span<const double> state,
                                  std::span<const double> dq,
                                  std::span<double> grad) const {
  if (dq.size() != static_cast<std::size_t>(shape_.actions) ||
      grad.size() != params_.size()) {
    throw DimensionMismatch("gradient buffers do not match the network");
  }
  Activations act;
  Run(state, act);
  const int width = last_width();
  const std::vector<double>& h = act.layers.back();

  double dv = 0.0;
  for (double d : dq) dv += d;
  const double mean_dq = dv / static_cast<double>(shape_.actions);

  std::vector<double> dh(width, 0.0);
  for (int i = 0; i < width; ++i) {
    grad[value_offset_ + i] += dv * h[i];
    dh[i] += dv * params_[value_offset_ + i];
  }
  grad[value_offset_ + width] += dv;
  for (int a = 0; a < shape_.actions; ++a) {
    const double da = dq[a] - mean_dq;
    if (da == 0.0) continue;
    const std::size_t row = advantage_offset_ + static_cast<std::size_t>(a) * (width + 1);
    for (int i = 0; i < width; ++i) {
      grad[row + i] += da * h[i];
      dh[i] += da * params_[row + i];
    }
    grad[row + width] += da;
  }

  for (std::size_t l = trunk_.size(); l-- > 0;) {
    const Layer& layer = trunk_[l];
    const std::vector<double>& x = act.layers[l];
    const std::vector<double>& y = act.layers[l + 1];
    std::vector<double> dx(layer.in, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      if (y[o] <= 0.0) continue;
      const double d = dh[o];
      const std::size_t row = layer.w + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) {
        grad[row + i] += d * x[i];
        dx[i] += d * params_[row + i];
      }
      grad[layer.b + o] += d;
    }
    dh = std::move(dx);
  }
}

double GlobalNorm(std::span<const double> grad) {
  double sum = 0.0;
  for (double g : grad) sum += g * g;
  return std::sqrt(sum);
}

double ClipGlobalNorm(std::span<double> grad, double max_norm) {
  const double norm = GlobalNorm(grad);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::Step(std::span<double> params, std::span<const double> grad) {
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0);
    v_.assign(params.size(), 0.0);
    step_ = 0;
  }
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

MomentumOptimizer::MomentumOptimizer(double lr, double momentum)
    : lr_(lr), momentum_(momentum) {}

void MomentumOptimizer::Step(std::span<double> params,
                             std::span<const double> grad) {
  if (velocity_.size() != params.size()) velocity_.assign(params.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity_[i] = momentum_ * velocity_[i] + grad[i];
    params[i] -= lr_ * velocity_[i];
  }
}

}  // namespace aeronet
