#include "splitparse/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splitparse/error.hpp"

namespace splitparse {

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  std::int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw InvalidArgument("tensor extent must be positive, got " + shape_str());
    n *= d;
  }
  v.assign(static_cast<size_t>(n), 0.0);
}

Tensor Tensor::scalar(double x) {
  Tensor t({1});
  t.v[0] = x;
  return t;
}

Tensor Tensor::from(std::vector<int> s, std::vector<double> values) {
  Tensor t(std::move(s));
  if (t.v.size() != values.size())
    throw InvalidArgument("tensor init size mismatch for shape " + t.shape_str());
  t.v = std::move(values);
  return t;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << "]";
  return os.str();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                          b.shape_str());
}

static void require_rank(const Tensor& t, int r, const char* op) {
  if (t.rank() != r)
    throw InvalidArgument(std::string(op) + ": expected rank " + std::to_string(r) + ", got " +
                          t.shape_str());
}

Tensor k_matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  if (a.dim(1) != b.dim(0))
    throw InvalidArgument("matmul: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor out({m, n});
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < k; ++p) {
      const double av = a.at(i, p);
      if (av == 0.0) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) += av * b.at(p, j);
    }
  return out;
}

Tensor k_matmul_nt(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul_nt");
  require_rank(b, 2, "matmul_nt");
  if (a.dim(1) != b.dim(1))
    throw InvalidArgument("matmul_nt: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  const int m = a.dim(0), k = a.dim(1), n = b.dim(0);
  Tensor out({m, n});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += a.at(i, p) * b.at(j, p);
      out.at(i, j) = s;
    }
  return out;
}

Tensor k_matvec(const Tensor& a, const Tensor& x) {
  require_rank(a, 2, "matvec");
  require_rank(x, 1, "matvec");
  if (a.dim(1) != x.dim(0))
    throw InvalidArgument("matvec: shape mismatch " + a.shape_str() + " vs " + x.shape_str());
  const int m = a.dim(0), k = a.dim(1);
  Tensor out({m});
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int p = 0; p < k; ++p) s += a.at(i, p) * x.at(p);
    out.at(i) = s;
  }
  return out;
}

Tensor k_tmatvec(const Tensor& a, const Tensor& x) {
  require_rank(a, 2, "tmatvec");
  require_rank(x, 1, "tmatvec");
  if (a.dim(0) != x.dim(0))
    throw InvalidArgument("tmatvec: shape mismatch " + a.shape_str() + " vs " + x.shape_str());
  const int m = a.dim(0), k = a.dim(1);
  Tensor out({k});
  for (int i = 0; i < m; ++i) {
    const double xv = x.at(i);
    if (xv == 0.0) continue;
    for (int j = 0; j < k; ++j) out.at(j) += a.at(i, j) * xv;
  }
  return out;
}

Tensor k_add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

Tensor k_mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
  return out;
}

Tensor k_scale(const Tensor& a, double c) {
  Tensor out = a;
  for (double& x : out.v) x *= c;
  return out;
}

Tensor k_add_rowwise(const Tensor& m, const Tensor& row) {
  require_rank(m, 2, "add_rowwise");
  require_rank(row, 1, "add_rowwise");
  if (m.dim(1) != row.dim(0))
    throw InvalidArgument("add_rowwise: shape mismatch " + m.shape_str() + " vs " +
                          row.shape_str());
  Tensor out = m;
  for (int r = 0; r < m.dim(0); ++r)
    for (int c = 0; c < m.dim(1); ++c) out.at(r, c) += row.at(c);
  return out;
}

Tensor k_concat(const std::vector<const Tensor*>& parts) {
  int total = 0;
  for (const Tensor* p : parts) {
    require_rank(*p, 1, "concat");
    total += p->dim(0);
  }
  if (total == 0) throw InvalidArgument("concat: empty result");
  Tensor out({total});
  int off = 0;
  for (const Tensor* p : parts) {
    std::copy(p->v.begin(), p->v.end(), out.v.begin() + off);
    off += p->dim(0);
  }
  return out;
}

Tensor k_slice(const Tensor& x, int lo, int len) {
  require_rank(x, 1, "slice");
  if (lo < 0 || len <= 0 || lo + len > x.dim(0))
    throw InvalidArgument("slice: range [" + std::to_string(lo) + "," + std::to_string(lo + len) +
                          ") out of " + x.shape_str());
  Tensor out({len});
  std::copy(x.v.begin() + lo, x.v.begin() + lo + len, out.v.begin());
  return out;
}

Tensor k_row(const Tensor& m, int r) {
  require_rank(m, 2, "row");
  if (r < 0 || r >= m.dim(0))
    throw InvalidArgument("row: index " + std::to_string(r) + " out of " + m.shape_str());
  Tensor out({m.dim(1)});
  std::copy(m.v.begin() + static_cast<size_t>(r) * m.dim(1),
            m.v.begin() + static_cast<size_t>(r + 1) * m.dim(1), out.v.begin());
  return out;
}

Tensor k_stack_rows(const std::vector<const Tensor*>& rows) {
  if (rows.empty()) throw InvalidArgument("stack_rows: no rows");
  const int w = rows[0]->dim(0);
  Tensor out({static_cast<int>(rows.size()), w});
  for (size_t r = 0; r < rows.size(); ++r) {
    require_rank(*rows[r], 1, "stack_rows");
    if (rows[r]->dim(0) != w)
      throw InvalidArgument("stack_rows: shape mismatch " + rows[r]->shape_str() + " vs [" +
                            std::to_string(w) + "]");
    std::copy(rows[r]->v.begin(), rows[r]->v.end(),
              out.v.begin() + static_cast<size_t>(r) * w);
  }
  return out;
}

Tensor k_tanh(const Tensor& x) {
  Tensor out = x;
  for (double& a : out.v) a = std::tanh(a);
  return out;
}

Tensor k_sigmoid(const Tensor& x) {
  Tensor out = x;
  for (double& a : out.v) a = 1.0 / (1.0 + std::exp(-a));
  return out;
}

Tensor k_leaky_relu(const Tensor& x, double slope) {
  Tensor out = x;
  for (double& a : out.v) a = a >= 0.0 ? a : slope * a;
  return out;
}

Tensor k_log_softmax(const Tensor& x) {
  require_rank(x, 1, "log_softmax");
  if (x.dim(0) == 0) throw InvalidArgument("log_softmax: empty axis");
  double m = x.v[0];
  for (double a : x.v) m = std::max(m, a);
  double z = 0.0;
  for (double a : x.v) z += std::exp(a - m);
  const double lz = std::log(z) + m;
  Tensor out = x;
  for (double& a : out.v) a -= lz;
  return out;
}

Tensor k_bilinear(const Tensor& x, const Tensor& w, const Tensor& y) {
  require_rank(x, 1, "bilinear");
  require_rank(w, 3, "bilinear");
  require_rank(y, 1, "bilinear");
  if (w.dim(0) != x.dim(0) || w.dim(2) != y.dim(0))
    throw InvalidArgument("bilinear: shape mismatch " + x.shape_str() + " x " + w.shape_str() +
                          " x " + y.shape_str());
  const int d1 = w.dim(0), L = w.dim(1), d2 = w.dim(2);
  Tensor out({L});
  for (int a = 0; a < d1; ++a) {
    const double xv = x.at(a);
    if (xv == 0.0) continue;
    for (int l = 0; l < L; ++l) {
      double s = 0.0;
      for (int b = 0; b < d2; ++b) s += w.at(a, l, b) * y.at(b);
      out.at(l) += xv * s;
    }
  }
  return out;
}

}  // namespace splitparse
