#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace einlab {

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 3;
inline constexpr int kMaxJetCoeffs = 84;  // C(6 + 3, 3)

/// Number of monomials of total degree <= order in nvar variables.
int jet_size(int nvar, int order);

/// Exponent vector of the index-th monomial in the graded ordering.
std::array<int, 6> jet_monomial(int nvar, int index);

/// Truncated multivariate Taylor polynomial.
///
/// Stores the Taylor coefficients c_a = (d^a f)(x0) / a! for every
/// multi-index a with |a| <= order, in graded order. Arithmetic on jets is
/// exact arithmetic on truncated Taylor series, so evaluating a formula on
/// seeded coordinate jets yields its partial derivatives up to `order`
/// without truncation error.
///
/// A jet with nvar() == 0 is a plain constant and combines with jets of any
/// dimension. Binary operations truncate to the smaller order of the two
/// operands; differentiation lowers the order by one.
class Jet {
 public:
  Jet() = default;
  Jet(double value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)

  /// Coordinate jet x_index seeded at `value`.
  static Jet variable(int nvar, int order, int index, double value);
  static Jet zero(int nvar, int order);

  int nvar() const { return nvar_; }
  int order() const { return order_; }
  int size() const { return jet_size(nvar_, order_); }
  bool is_constant() const { return nvar_ == 0; }

  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& coeff(int i) { return c_[static_cast<std::size_t>(i)]; }

  /// Partial derivative d^alpha f at the base point; alpha holds one
  /// exponent per variable.
  double partial(std::span<const int> alpha) const;
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;
  /// Restrict to the slice where variable `var` stays at its base value.
  Jet drop_variable(int var) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a += -b; }
  friend Jet operator-(double a, const Jet& b) { return (-b) + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }
  friend Jet operator/(double a, const Jet& b);

 private:
  void require_compatible(const Jet& o) const;

  std::array<double, kMaxJetCoeffs> c_{};
  std::int8_t nvar_ = 0;
  std::int8_t order_ = kMaxJetOrder;
};

/// Evaluate sum_k taylor[k] (x - x0)^k for the univariate Taylor
/// coefficients of a function at x0 = x.value().
Jet compose(const Jet& x, std::span<const double> taylor);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet ipow(const Jet& x, int p);
Jet reciprocal(const Jet& x);

}  // namespace einlab
