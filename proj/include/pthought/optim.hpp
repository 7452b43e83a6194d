#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pthought/errors.hpp"
#include "pthought/model.hpp"

namespace pthought::optim {

using model::NamedTensor;
using numkit::Tensor;

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment buffers, one per parameter in update order.
struct AdamState {
  long step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  void ensure(std::span<const NamedTensor> params) {
    if (m.empty()) {
      for (const auto& p : params) {
        m.emplace_back(p.tensor.size(), 0.0);
        v.emplace_back(p.tensor.size(), 0.0);
      }
    }
    if (m.size() != params.size()) throw ShapeError("adam: optimizer state does not match parameter list");
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (m[i].size() != params[i].tensor.size()) {
        throw ShapeError("adam: optimizer state shape mismatch for " + params[i].name);
      }
    }
  }
};

/// One bias-corrected Adam update of every tensor in `params` from its
/// gradient buffer (a missing buffer counts as zero).
inline void adam_step(std::span<const NamedTensor> params, AdamState& state, const AdamConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("adam: learning_rate must be positive");
  state.ensure(params);
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) {
      if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient in " + p.name);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor w = params[i].tensor;
    auto& m = state.m[i];
    auto& v = state.v[i];
    const bool has = w.has_grad();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double g = has ? w.grad()[k] : 0.0;
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      w[k] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
}

/// Rescales all gradients so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
inline double clip_grad_norm(std::span<const NamedTensor> params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double f = max_norm / norm;
    for (const auto& p : params) {
      Tensor w = p.tensor;
      if (!w.has_grad()) continue;
      for (double& g : w.grad()) g *= f;
    }
  }
  return norm;
}

}  // namespace pthought::optim
