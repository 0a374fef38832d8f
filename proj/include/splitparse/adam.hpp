#pragma once

#include <cstdint>

#include "splitparse/params.hpp"

namespace splitparse {

struct AdamConfig {
  double base_lr = 0.002;
  double decay_rate = 0.75;
  int decay_every = 5000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // L2 added to gradients; off by default
};

// Adam with a stepwise exponential learning-rate schedule:
// lr(t) = base_lr * decay_rate^floor(t / decay_every).
struct AdamState {
  AdamConfig cfg;
  std::int64_t step = 0;
  std::vector<Tensor> m, v;

  AdamState(const ParamStore& params, AdamConfig config);
  double current_lr() const;
  void apply(ParamStore& params);  // consumes params.grad; throws NumericalError on NaN/Inf
};

// Rescales all gradients so their global L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_global_norm(ParamStore& params, double max_norm);

}  // namespace splitparse
