#pragma once

#include <cstddef>
#include <vector>

#include "einlab/jet.hpp"

namespace einlab {

/// Dense tensor over a dim^rank index box, row-major. Index positions are
/// whatever the producing function documents; there is no variance tag.
template <class T>
class TensorT {
 public:
  TensorT() = default;
  TensorT(int dim, int rank, const T& fill = T(0.0)) : dim_(dim), rank_(rank) {
    std::size_t sz = 1;
    for (int r = 0; r < rank; ++r) sz *= static_cast<std::size_t>(dim);
    data_.assign(sz, fill);
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& operator()(int i) { return data_[idx(i)]; }
  const T& operator()(int i) const { return data_[idx(i)]; }
  T& operator()(int i, int j) { return data_[idx(i, j)]; }
  const T& operator()(int i, int j) const { return data_[idx(i, j)]; }
  T& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }
  T& operator()(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }
  const T& operator()(int i, int j, int k, int l) const { return data_[idx(i, j, k, l)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t idx(int i) const { return static_cast<std::size_t>(i); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * dim_ + j); }
  std::size_t idx(int i, int j, int k) const { return static_cast<std::size_t>((i * dim_ + j) * dim_ + k); }
  std::size_t idx(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * dim_ + j) * dim_ + k) * dim_ + l);
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

using Tensor = TensorT<double>;
using JTensor = TensorT<Jet>;

/// Base-point values of a jet tensor.
Tensor values(const JTensor& t);

/// Jet tensor with every entry truncated to `order`.
JTensor truncated(const JTensor& t, int order);

/// Restrict every entry to the slice where variable `var` is frozen.
JTensor drop_variable(const JTensor& t, int var);

/// Lowest jet order among the entries (kMaxJetOrder for constants only).
int min_order(const JTensor& t);

/// Inverse of a symmetric positive definite jet matrix. Throws
/// DegenerateMetricError if the base-point value is not positive definite.
JTensor inverse_spd(const JTensor& g);

/// Determinant of a symmetric positive definite jet matrix.
Jet determinant_spd(const JTensor& g);

/// Smallest eigenvalue of a symmetric matrix of values.
double min_eigenvalue(const Tensor& m);

/// Max-abs entry.
double max_abs(const Tensor& t);

/// Index of (i, j), i <= j, in packed upper-triangular storage.
inline int sym_index(int i, int j, int n) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * n - i * (i - 1) / 2 + (j - i);
}

inline int sym_size(int n) { return n * (n + 1) / 2; }

}  // namespace einlab
