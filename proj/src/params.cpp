#include "splitparse/params.hpp"

#include <cmath>

#include "splitparse/error.hpp"

namespace splitparse {

Param& ParamStore::add(const std::string& name, std::vector<int> shape) {
  if (by_name_.count(name)) throw InvalidArgument("duplicate parameter name: " + name);
  auto p = std::make_unique<Param>();
  p->name = name;
  p->value = Tensor::zeros(shape);
  p->grad = Tensor::zeros(std::move(shape));
  Param& ref = *p;
  by_name_[name] = p.get();
  items_.push_back(std::move(p));
  return ref;
}

Param* ParamStore::find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const Param* ParamStore::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

void ParamStore::zero_grads() {
  for (auto& p : items_)
    for (double& g : p->grad.v) g = 0.0;
}

std::int64_t ParamStore::total_size() const {
  std::int64_t n = 0;
  for (const auto& p : items_) n += p->value.size();
  return n;
}

std::vector<Tensor> ParamStore::snapshot_values() const {
  std::vector<Tensor> out;
  out.reserve(items_.size());
  for (const auto& p : items_) out.push_back(p->value);
  return out;
}

void ParamStore::restore_values(const std::vector<Tensor>& values) {
  if (values.size() != items_.size())
    throw InvalidArgument("restore_values: parameter count mismatch");
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values[i].same_shape(items_[i]->value))
      throw InvalidArgument("restore_values: shape mismatch for " + items_[i]->name);
    items_[i]->value = values[i];
  }
}

void init_xavier_uniform(Tensor& t, int fan_in, int fan_out, Rng& rng) {
  const double r = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& x : t.v) x = rng.uniform(-r, r);
}

void init_uniform(Tensor& t, double radius, Rng& rng) {
  for (double& x : t.v) x = rng.uniform(-radius, radius);
}

}  // namespace splitparse
