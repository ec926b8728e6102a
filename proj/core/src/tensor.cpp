#include "einlab/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "einlab/error.hpp"

namespace einlab {

Tensor values(const JTensor& t) {
  Tensor out(t.dim(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].value();
  return out;
}

JTensor truncated(const JTensor& t, int order) {
  JTensor out = t;
  for (auto& j : out.data()) j = j.truncated(order);
  return out;
}

JTensor drop_variable(const JTensor& t, int var) {
  JTensor out = t;
  for (auto& j : out.data()) j = j.drop_variable(var);
  return out;
}

int min_order(const JTensor& t) {
  int o = kMaxJetOrder;
  for (const auto& j : t.data()) {
    if (!j.is_constant()) o = std::min(o, j.order());
  }
  return o;
}

namespace {

Eigen::MatrixXd to_eigen(const JTensor& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j).value();
  return m;
}

JTensor matmul(const JTensor& a, const JTensor& b) {
  const int n = a.dim();
  JTensor c(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet s(0.0);
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace

JTensor inverse_spd(const JTensor& g) {
  const int n = g.dim();
  const Eigen::MatrixXd m = to_eigen(g);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DegenerateMetricError("metric is not positive definite");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  JTensor x(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Jet(0.5 * (inv(i, j) + inv(j, i)));
  // Newton X <- X (2I - G X) doubles the number of correct Taylor orders.
  for (int correct = 0; correct < min_order(g);) {
    JTensor gx = matmul(g, x);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gx(i, j) = -gx(i, j);
        if (i == j) gx(i, j) += 2.0;
      }
    }
    x = matmul(x, gx);
    correct = 2 * correct + 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Jet s = 0.5 * (x(i, j) + x(j, i));
      x(i, j) = s;
      x(j, i) = s;
    }
  return x;
}

Jet determinant_spd(const JTensor& g) {
  const int n = g.dim();
  JTensor a = g;
  Jet det(1.0);
  for (int k = 0; k < n; ++k) {
    if (!(a(k, k).value() > 0.0)) throw DegenerateMetricError("matrix is not positive definite");
    det *= a(k, k);
    const Jet inv = reciprocal(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const Jet f = a(i, k) * inv;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

double min_eigenvalue(const Tensor& t) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (t(i, j) + t(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace einlab
