#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace splitparse {

// Dense row-major float64 tensor. Rank 1..3 is all the model needs.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }
  static Tensor scalar(double x);
  static Tensor from(std::vector<int> s, std::vector<double> values);

  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  std::string shape_str() const;

  double& at(int i) { return v[static_cast<size_t>(i)]; }
  double at(int i) const { return v[static_cast<size_t>(i)]; }
  double& at(int r, int c) { return v[static_cast<size_t>(r) * shape[1] + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * shape[1] + c]; }
  double& at(int a, int b, int c) {
    return v[(static_cast<size_t>(a) * shape[1] + b) * shape[2] + c];
  }
  double at(int a, int b, int c) const {
    return v[(static_cast<size_t>(a) * shape[1] + b) * shape[2] + c];
  }
};

// Forward kernels. The autodiff ops and the gradient-free inference path both
// call these, so the two paths produce bit-identical values.
Tensor k_matmul(const Tensor& a, const Tensor& b);      // (m,k)x(k,n) -> (m,n)
Tensor k_matmul_nt(const Tensor& a, const Tensor& b);   // (m,k)x(n,k)^T -> (m,n)
Tensor k_matvec(const Tensor& a, const Tensor& x);      // (m,k)x(k) -> (m)
Tensor k_tmatvec(const Tensor& a, const Tensor& x);     // (m,k)^T x(m) -> (k)
Tensor k_add(const Tensor& a, const Tensor& b);
Tensor k_mul(const Tensor& a, const Tensor& b);
Tensor k_scale(const Tensor& a, double c);
Tensor k_add_rowwise(const Tensor& m, const Tensor& row);
Tensor k_concat(const std::vector<const Tensor*>& parts);          // rank-1
Tensor k_slice(const Tensor& x, int lo, int len);                  // rank-1
Tensor k_row(const Tensor& m, int r);
Tensor k_stack_rows(const std::vector<const Tensor*>& rows);
Tensor k_tanh(const Tensor& x);
Tensor k_sigmoid(const Tensor& x);
Tensor k_leaky_relu(const Tensor& x, double slope);
Tensor k_log_softmax(const Tensor& x);                             // rank-1
Tensor k_bilinear(const Tensor& x, const Tensor& w, const Tensor& y);  // (d1),(d1,L,d2),(d2)->(L)

void require_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace splitparse
