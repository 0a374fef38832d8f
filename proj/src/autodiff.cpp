#include "splitparse/autodiff.hpp"

#include <cmath>

#include "splitparse/error.hpp"

namespace splitparse::ad {

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::param(const Tensor& value, Tensor& grad_sink) {
  if (!value.same_shape(grad_sink))
    throw InvalidArgument("param: grad sink shape " + grad_sink.shape_str() +
                          " differs from value " + value.shape_str());
  Node n;
  n.ext = &value;
  n.sink = &grad_sink;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::make(Tensor value, std::function<void(Tape&, int)> back) {
  Node n;
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor& Tape::grad_buf(int id) {
  Node& n = nodes_[static_cast<size_t>(id)];
  if (!n.grad_alloc) {
    n.grad = Tensor::zeros(val(id).shape);
    n.grad_alloc = true;
  }
  return n.grad;
}

void Tape::backward(Var loss) {
  if (used_) throw InvalidArgument("backward: tape already consumed; rebuild the graph");
  used_ = true;
  if (!loss.valid() || loss.id >= static_cast<int>(nodes_.size()))
    throw InvalidArgument("backward: invalid loss node");
  if (val(loss).size() != 1)
    throw InvalidArgument("backward: loss must be scalar, got " + val(loss).shape_str());
  grad_buf(loss.id).v[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (!n.grad_alloc) continue;
    if (n.back) n.back(*this, id);
    if (n.sink) {
      for (size_t i = 0; i < n.grad.v.size(); ++i) n.sink->v[i] += n.grad.v[i];
    }
  }
}

namespace {

void accumulate(Tensor& dst, const Tensor& src) {
  for (size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += src.v[i];
}

}  // namespace

Var matmul(Tape& t, Var a, Var b) {
  Tensor out = k_matmul(t.val(a), t.val(b));
  return t.make(std::move(out), [a, b](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& av = tp.val(a);
    const Tensor& bv = tp.val(b);
    Tensor& da = tp.grad_buf(a.id);
    Tensor& db = tp.grad_buf(b.id);
    const int m = av.dim(0), k = av.dim(1), n = bv.dim(1);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < k; ++p) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += g.at(i, j) * bv.at(p, j);
        da.at(i, p) += s;
      }
    for (int p = 0; p < k; ++p)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += av.at(i, p) * g.at(i, j);
        db.at(p, j) += s;
      }
  });
}

Var matmul_nt(Tape& t, Var a, Var b) {
  Tensor out = k_matmul_nt(t.val(a), t.val(b));
  return t.make(std::move(out), [a, b](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& av = tp.val(a);
    const Tensor& bv = tp.val(b);
    Tensor& da = tp.grad_buf(a.id);
    Tensor& db = tp.grad_buf(b.id);
    const int m = av.dim(0), k = av.dim(1), n = bv.dim(0);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < k; ++p) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += g.at(i, j) * bv.at(j, p);
        da.at(i, p) += s;
      }
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < k; ++p) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += g.at(i, j) * av.at(i, p);
        db.at(j, p) += s;
      }
  });
}

Var matvec(Tape& t, Var a, Var x) {
  Tensor out = k_matvec(t.val(a), t.val(x));
  return t.make(std::move(out), [a, x](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& av = tp.val(a);
    const Tensor& xv = tp.val(x);
    Tensor& da = tp.grad_buf(a.id);
    Tensor& dx = tp.grad_buf(x.id);
    const int m = av.dim(0), k = av.dim(1);
    for (int i = 0; i < m; ++i) {
      const double gi = g.at(i);
      if (gi == 0.0) continue;
      for (int p = 0; p < k; ++p) {
        da.at(i, p) += gi * xv.at(p);
        dx.at(p) += gi * av.at(i, p);
      }
    }
  });
}

Var tmatvec(Tape& t, Var a, Var x) {
  Tensor out = k_tmatvec(t.val(a), t.val(x));
  return t.make(std::move(out), [a, x](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& av = tp.val(a);
    const Tensor& xv = tp.val(x);
    Tensor& da = tp.grad_buf(a.id);
    Tensor& dx = tp.grad_buf(x.id);
    const int m = av.dim(0), k = av.dim(1);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) {
        da.at(i, j) += xv.at(i) * g.at(j);
        s += av.at(i, j) * g.at(j);
      }
      dx.at(i) += s;
    }
  });
}

Var add(Tape& t, Var a, Var b) {
  Tensor out = k_add(t.val(a), t.val(b));
  return t.make(std::move(out), [a, b](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    accumulate(tp.grad_buf(a.id), g);
    accumulate(tp.grad_buf(b.id), g);
  });
}

Var add_n(Tape& t, const std::vector<Var>& xs) {
  if (xs.empty()) return t.constant(Tensor::scalar(0.0));
  Tensor out = t.val(xs[0]);
  for (size_t i = 1; i < xs.size(); ++i) {
    require_same_shape(out, t.val(xs[i]), "add_n");
    for (size_t p = 0; p < out.v.size(); ++p) out.v[p] += t.val(xs[i]).v[p];
  }
  std::vector<Var> args = xs;
  return t.make(std::move(out), [args](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    for (Var a : args) accumulate(tp.grad_buf(a.id), g);
  });
}

Var add_rowwise(Tape& t, Var m, Var rowv) {
  Tensor out = k_add_rowwise(t.val(m), t.val(rowv));
  return t.make(std::move(out), [m, rowv](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    accumulate(tp.grad_buf(m.id), g);
    Tensor& dr = tp.grad_buf(rowv.id);
    for (int r = 0; r < g.dim(0); ++r)
      for (int c = 0; c < g.dim(1); ++c) dr.at(c) += g.at(r, c);
  });
}

Var mul(Tape& t, Var a, Var b) {
  Tensor out = k_mul(t.val(a), t.val(b));
  return t.make(std::move(out), [a, b](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& av = tp.val(a);
    const Tensor& bv = tp.val(b);
    Tensor& da = tp.grad_buf(a.id);
    Tensor& db = tp.grad_buf(b.id);
    for (size_t i = 0; i < g.v.size(); ++i) {
      da.v[i] += g.v[i] * bv.v[i];
      db.v[i] += g.v[i] * av.v[i];
    }
  });
}

Var scale(Tape& t, Var a, double c) {
  Tensor out = k_scale(t.val(a), c);
  return t.make(std::move(out), [a, c](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    Tensor& da = tp.grad_buf(a.id);
    for (size_t i = 0; i < g.v.size(); ++i) da.v[i] += c * g.v[i];
  });
}

Var concat(Tape& t, const std::vector<Var>& parts) {
  std::vector<const Tensor*> vs;
  vs.reserve(parts.size());
  for (Var p : parts) vs.push_back(&t.val(p));
  Tensor out = k_concat(vs);
  std::vector<Var> args = parts;
  return t.make(std::move(out), [args](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    int off = 0;
    for (Var a : args) {
      Tensor& da = tp.grad_buf(a.id);
      for (int i = 0; i < da.dim(0); ++i) da.at(i) += g.at(off + i);
      off += da.dim(0);
    }
  });
}

Var slice(Tape& t, Var x, int lo, int len) {
  Tensor out = k_slice(t.val(x), lo, len);
  return t.make(std::move(out), [x, lo, len](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    Tensor& dx = tp.grad_buf(x.id);
    for (int i = 0; i < len; ++i) dx.at(lo + i) += g.at(i);
  });
}

Var row(Tape& t, Var m, int r) {
  Tensor out = k_row(t.val(m), r);
  return t.make(std::move(out), [m, r](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    Tensor& dm = tp.grad_buf(m.id);
    for (int c = 0; c < g.dim(0); ++c) dm.at(r, c) += g.at(c);
  });
}

Var stack_rows(Tape& t, const std::vector<Var>& rows) {
  std::vector<const Tensor*> vs;
  vs.reserve(rows.size());
  for (Var r : rows) vs.push_back(&t.val(r));
  Tensor out = k_stack_rows(vs);
  std::vector<Var> args = rows;
  return t.make(std::move(out), [args](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    for (size_t r = 0; r < args.size(); ++r) {
      Tensor& dr = tp.grad_buf(args[r].id);
      for (int c = 0; c < g.dim(1); ++c) dr.at(c) += g.at(static_cast<int>(r), c);
    }
  });
}

Var lookup_row(Tape& t, Var table, int index) {
  const Tensor& tab = t.val(table);
  if (tab.rank() != 2)
    throw InvalidArgument("lookup_row: table must be rank 2, got " + tab.shape_str());
  if (index < 0 || index >= tab.dim(0))
    throw InvalidArgument("lookup_row: id " + std::to_string(index) + " out of " +
                          tab.shape_str());
  Tensor out = k_row(tab, index);
  return t.make(std::move(out), [table, index](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    Tensor& dt = tp.grad_buf(table.id);
    for (int c = 0; c < g.dim(0); ++c) dt.at(index, c) += g.at(c);
  });
}

Var tanh(Tape& t, Var x) {
  Tensor out = k_tanh(t.val(x));
  return t.make(std::move(out), [x](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& y = tp.val(self);
    Tensor& dx = tp.grad_buf(x.id);
    for (size_t i = 0; i < g.v.size(); ++i) dx.v[i] += g.v[i] * (1.0 - y.v[i] * y.v[i]);
  });
}

Var sigmoid(Tape& t, Var x) {
  Tensor out = k_sigmoid(t.val(x));
  return t.make(std::move(out), [x](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& y = tp.val(self);
    Tensor& dx = tp.grad_buf(x.id);
    for (size_t i = 0; i < g.v.size(); ++i) dx.v[i] += g.v[i] * y.v[i] * (1.0 - y.v[i]);
  });
}

Var leaky_relu(Tape& t, Var x, double slope) {
  Tensor out = k_leaky_relu(t.val(x), slope);
  return t.make(std::move(out), [x, slope](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& xv = tp.val(x);
    Tensor& dx = tp.grad_buf(x.id);
    for (size_t i = 0; i < g.v.size(); ++i)
      dx.v[i] += g.v[i] * (xv.v[i] >= 0.0 ? 1.0 : slope);
  });
}

Var log_softmax(Tape& t, Var x) {
  Tensor out = k_log_softmax(t.val(x));
  return t.make(std::move(out), [x](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& y = tp.val(self);
    Tensor& dx = tp.grad_buf(x.id);
    double gsum = 0.0;
    for (double gv : g.v) gsum += gv;
    for (size_t i = 0; i < g.v.size(); ++i) dx.v[i] += g.v[i] - std::exp(y.v[i]) * gsum;
  });
}

Var pick(Tape& t, Var x, int index) {
  const Tensor& xv = t.val(x);
  if (xv.rank() != 1 || index < 0 || index >= xv.dim(0))
    throw InvalidArgument("pick: index " + std::to_string(index) + " out of " + xv.shape_str());
  Tensor out = Tensor::scalar(xv.at(index));
  return t.make(std::move(out), [x, index](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    tp.grad_buf(x.id).at(index) += g.v[0];
  });
}

Var sum_all(Tape& t, Var x) {
  double s = 0.0;
  for (double v : t.val(x).v) s += v;
  return t.make(Tensor::scalar(s), [x](Tape& tp, int self) {
    const double g = tp.grad_buf(self).v[0];
    Tensor& dx = tp.grad_buf(x.id);
    for (double& v : dx.v) v += g;
  });
}

Var bilinear(Tape& t, Var x, Var w, Var y) {
  Tensor out = k_bilinear(t.val(x), t.val(w), t.val(y));
  return t.make(std::move(out), [x, w, y](Tape& tp, int self) {
    const Tensor& g = tp.grad_buf(self);
    const Tensor& xv = tp.val(x);
    const Tensor& wv = tp.val(w);
    const Tensor& yv = tp.val(y);
    Tensor& dx = tp.grad_buf(x.id);
    Tensor& dw = tp.grad_buf(w.id);
    Tensor& dy = tp.grad_buf(y.id);
    const int d1 = wv.dim(0), L = wv.dim(1), d2 = wv.dim(2);
    for (int l = 0; l < L; ++l) {
      const double gl = g.at(l);
      if (gl == 0.0) continue;
      for (int a = 0; a < d1; ++a) {
        double s = 0.0;
        for (int b = 0; b < d2; ++b) {
          s += wv.at(a, l, b) * yv.at(b);
          dw.at(a, l, b) += gl * xv.at(a) * yv.at(b);
          dy.at(b) += gl * xv.at(a) * wv.at(a, l, b);
        }
        dx.at(a) += gl * s;
      }
    }
  });
}

Var nll_loss(Tape& t, Var logits, int target) {
  Var lp = log_softmax(t, logits);
  return scale(t, pick(t, lp, target), -1.0);
}

}  // namespace splitparse::ad
