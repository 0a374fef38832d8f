#pragma once

#include <functional>
#include <vector>

#include "splitparse/tensor.hpp"

namespace splitparse::ad {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Append-only record of primitive ops. backward() walks it once, in reverse,
// and accumulates leaf gradients into the sinks bound by param(). A tape is
// single-use: a second backward() without rebuilding the graph throws.
class Tape {
 public:
  Var constant(Tensor value);
  Var param(const Tensor& value, Tensor& grad_sink);  // value referenced, not copied

  const Tensor& val(Var v) const { return val(v.id); }
  const Tensor& val(int id) const {
    const Node& n = nodes_[static_cast<size_t>(id)];
    return n.ext ? *n.ext : n.value;
  }
  Tensor& grad_buf(int id);  // lazily zero-initialized to the value shape
  bool has_grad(int id) const { return nodes_[static_cast<size_t>(id)].grad_alloc; }

  void backward(Var loss);
  size_t size() const { return nodes_.size(); }

  Var make(Tensor value, std::function<void(Tape&, int)> back);

 private:
  struct Node {
    Tensor value;
    const Tensor* ext = nullptr;
    Tensor* sink = nullptr;
    Tensor grad;
    bool grad_alloc = false;
    std::function<void(Tape&, int)> back;
  };
  std::vector<Node> nodes_;
  bool used_ = false;
};

Var matmul(Tape& t, Var a, Var b);
Var matmul_nt(Tape& t, Var a, Var b);
Var matvec(Tape& t, Var a, Var x);
Var tmatvec(Tape& t, Var a, Var x);
Var add(Tape& t, Var a, Var b);
Var add_n(Tape& t, const std::vector<Var>& xs);  // empty -> scalar 0
Var add_rowwise(Tape& t, Var m, Var row);
Var mul(Tape& t, Var a, Var b);
Var scale(Tape& t, Var a, double c);
Var concat(Tape& t, const std::vector<Var>& parts);
Var slice(Tape& t, Var x, int lo, int len);
Var row(Tape& t, Var m, int r);
Var stack_rows(Tape& t, const std::vector<Var>& rows);
Var lookup_row(Tape& t, Var table, int index);
Var tanh(Tape& t, Var x);
Var sigmoid(Tape& t, Var x);
Var leaky_relu(Tape& t, Var x, double slope);
Var log_softmax(Tape& t, Var x);
Var pick(Tape& t, Var x, int index);  // rank-1 -> scalar
Var sum_all(Tape& t, Var x);          // any rank -> scalar
Var bilinear(Tape& t, Var x, Var w, Var y);
Var nll_loss(Tape& t, Var logits, int target);

}  // namespace splitparse::ad
