#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "splitparse/tensor.hpp"

namespace splitparse {

// Deterministic RNG. Doubles are derived from raw mt19937_64 bits so streams
// are reproducible across standard libraries, not just across runs.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::uint64_t raw() { return gen(); }
  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Named parameters in registration order. Registration order is the
// deterministic-initialization and checkpoint order.
class ParamStore {
 public:
  Param& add(const std::string& name, std::vector<int> shape);
  Param* find(const std::string& name);
  const Param* find(const std::string& name) const;
  const std::vector<std::unique_ptr<Param>>& items() const { return items_; }
  std::vector<std::unique_ptr<Param>>& items() { return items_; }
  void zero_grads();
  std::int64_t total_size() const;
  std::vector<Tensor> snapshot_values() const;
  void restore_values(const std::vector<Tensor>& values);

 private:
  std::vector<std::unique_ptr<Param>> items_;
  std::map<std::string, Param*> by_name_;
};

void init_xavier_uniform(Tensor& t, int fan_in, int fan_out, Rng& rng);
void init_uniform(Tensor& t, double radius, Rng& rng);

}  // namespace splitparse
