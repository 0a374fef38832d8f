#include "splitparse/adam.hpp"

#include <cmath>

#include "splitparse/error.hpp"

namespace splitparse {

AdamState::AdamState(const ParamStore& params, AdamConfig config) : cfg(config) {
  m.reserve(params.items().size());
  v.reserve(params.items().size());
  for (const auto& p : params.items()) {
    m.push_back(Tensor::zeros(p->value.shape));
    v.push_back(Tensor::zeros(p->value.shape));
  }
}

double AdamState::current_lr() const {
  const std::int64_t k = step / cfg.decay_every;
  return cfg.base_lr * std::pow(cfg.decay_rate, static_cast<double>(k));
}

void AdamState::apply(ParamStore& params) {
  if (params.items().size() != m.size())
    throw InvalidArgument("adam: state built for a different parameter set");
  const double lr = current_lr();
  const double t = static_cast<double>(step + 1);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (size_t i = 0; i < params.items().size(); ++i) {
    Param& p = *params.items()[i];
    for (size_t j = 0; j < p.value.v.size(); ++j) {
      double g = p.grad.v[j];
      if (!std::isfinite(g))
        throw NumericalError("adam: non-finite gradient in parameter '" + p.name +
                             "' at flat index " + std::to_string(j));
      if (cfg.weight_decay != 0.0) g += cfg.weight_decay * p.value.v[j];
      double& mi = m[i].v[j];
      double& vi = v[i].v[j];
      mi = cfg.beta1 * mi + (1.0 - cfg.beta1) * g;
      vi = cfg.beta2 * vi + (1.0 - cfg.beta2) * g * g;
      const double mhat = mi / bc1;
      const double vhat = vi / bc2;
      p.value.v[j] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
  ++step;
}

double clip_global_norm(ParamStore& params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params.items())
    for (double g : p->grad.v) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (auto& p : params.items())
      for (double& g : p->grad.v) g *= s;
  }
  return norm;
}

}  // namespace splitparse
