#include "einlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "einlab/error.hpp"

namespace einlab {
namespace {

using Exponents = std::array<std::int8_t, kMaxJetVars>;

struct Triple {
  std::int16_t a, b, out;
};

struct DerivEntry {
  std::int16_t src;
  double factor;
};

struct MonomialTable {
  int nvar = 0;
  std::vector<Exponents> exps;
  std::array<int, kMaxJetOrder + 1> size_upto{};
  std::array<std::vector<Triple>, kMaxJetOrder + 1> products;
  std::array<std::vector<DerivEntry>, kMaxJetVars> deriv;
  std::array<std::vector<std::int16_t>, kMaxJetVars> drop;
};

int degree(const Exponents& e) {
  int s = 0;
  for (auto v : e) s += v;
  return s;
}

void enumerate(int nvar, int remaining, int var, Exponents& cur, std::vector<Exponents>& out) {
  if (var == nvar - 1) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::int8_t>(remaining);
    out.push_back(cur);
    cur[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::int8_t>(k);
    enumerate(nvar, remaining - k, var + 1, cur, out);
  }
  cur[static_cast<std::size_t>(var)] = 0;
}

std::vector<Exponents> graded_monomials(int nvar) {
  std::vector<Exponents> out;
  for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
    Exponents cur{};
    if (nvar == 0) {
      if (deg == 0) out.push_back(cur);
      continue;
    }
    enumerate(nvar, deg, 0, cur, out);
  }
  return out;
}

MonomialTable build_table(int nvar) {
  MonomialTable t;
  t.nvar = nvar;
  t.exps = graded_monomials(nvar);
  std::map<Exponents, int> index;
  for (std::size_t i = 0; i < t.exps.size(); ++i) index[t.exps[i]] = static_cast<int>(i);
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    t.size_upto[static_cast<std::size_t>(k)] = static_cast<int>(
        std::count_if(t.exps.begin(), t.exps.end(), [k](const Exponents& e) { return degree(e) <= k; }));
  }
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    auto& prods = t.products[static_cast<std::size_t>(k)];
    const int n = t.size_upto[static_cast<std::size_t>(k)];
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const auto& ea = t.exps[static_cast<std::size_t>(a)];
        const auto& eb = t.exps[static_cast<std::size_t>(b)];
        if (degree(ea) + degree(eb) > k) continue;
        Exponents sum{};
        for (int v = 0; v < kMaxJetVars; ++v) {
          sum[static_cast<std::size_t>(v)] =
              static_cast<std::int8_t>(ea[static_cast<std::size_t>(v)] + eb[static_cast<std::size_t>(v)]);
        }
        prods.push_back({static_cast<std::int16_t>(a), static_cast<std::int16_t>(b),
                         static_cast<std::int16_t>(index.at(sum))});
      }
    }
  }
  for (int v = 0; v < nvar; ++v) {
    auto& d = t.deriv[static_cast<std::size_t>(v)];
    const int n = t.size_upto[kMaxJetOrder - 1];
    for (int i = 0; i < n; ++i) {
      Exponents up = t.exps[static_cast<std::size_t>(i)];
      up[static_cast<std::size_t>(v)] += 1;
      d.push_back({static_cast<std::int16_t>(index.at(up)),
                   static_cast<double>(up[static_cast<std::size_t>(v)])});
    }
  }
  return t;
}

struct Tables {
  std::array<MonomialTable, kMaxJetVars + 1> by_nvar;
  Tables() {
    for (int n = 0; n <= kMaxJetVars; ++n) by_nvar[static_cast<std::size_t>(n)] = build_table(n);
    // Slicing maps: monomials of the (n-1)-variable table embedded in the
    // n-variable table with a zero exponent inserted at position v.
    for (int n = 1; n <= kMaxJetVars; ++n) {
      auto& full = by_nvar[static_cast<std::size_t>(n)];
      const auto& small = by_nvar[static_cast<std::size_t>(n - 1)];
      std::map<Exponents, int> index;
      for (std::size_t i = 0; i < full.exps.size(); ++i) index[full.exps[i]] = static_cast<int>(i);
      for (int v = 0; v < n; ++v) {
        auto& map = full.drop[static_cast<std::size_t>(v)];
        for (const auto& e : small.exps) {
          Exponents ins{};
          for (int k = 0, src = 0; k < n; ++k) {
            ins[static_cast<std::size_t>(k)] = (k == v) ? std::int8_t{0} : e[static_cast<std::size_t>(src++)];
          }
          map.push_back(static_cast<std::int16_t>(index.at(ins)));
        }
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

const MonomialTable& table(int nvar) { return tables().by_nvar[static_cast<std::size_t>(nvar)]; }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

int jet_size(int nvar, int order) {
  if (order < 0) return 0;
  return table(nvar).size_upto[static_cast<std::size_t>(std::min(order, kMaxJetOrder))];
}

std::array<int, kMaxJetVars> jet_monomial(int nvar, int index) {
  const auto& e = table(nvar).exps.at(static_cast<std::size_t>(index));
  std::array<int, kMaxJetVars> out{};
  for (int v = 0; v < kMaxJetVars; ++v) out[static_cast<std::size_t>(v)] = e[static_cast<std::size_t>(v)];
  return out;
}

Jet Jet::variable(int nvar, int order, int index, double value) {
  if (nvar < 1 || nvar > kMaxJetVars) throw CapabilityError("jet: unsupported number of variables");
  if (order < 0 || order > kMaxJetOrder) throw CapabilityError("jet: unsupported order");
  Jet j = zero(nvar, order);
  j.c_[0] = value;
  if (order >= 1) j.c_[static_cast<std::size_t>(1 + index)] = 1.0;
  return j;
}

Jet Jet::zero(int nvar, int order) {
  Jet j;
  j.nvar_ = static_cast<std::int8_t>(nvar);
  j.order_ = static_cast<std::int8_t>(order);
  return j;
}

double Jet::partial(std::span<const int> alpha) const {
  int deg = 0;
  for (int a : alpha) deg += a;
  if (deg == 0) return c_[0];
  if (nvar_ == 0) return 0.0;
  if (deg > order_) throw CapabilityError("jet: derivative order " + std::to_string(deg) + " exceeds jet order");
  const auto& t = table(nvar_);
  Exponents e{};
  double fact = 1.0;
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    e[v] = static_cast<std::int8_t>(alpha[v]);
    fact *= factorial(alpha[v]);
  }
  for (int i = 0; i < size(); ++i) {
    if (t.exps[static_cast<std::size_t>(i)] == e) return fact * c_[static_cast<std::size_t>(i)];
  }
  return 0.0;
}

double Jet::d(int i) const {
  std::array<int, kMaxJetVars> a{};
  a[static_cast<std::size_t>(i)] += 1;
  return partial(std::span<const int>(a.data(), static_cast<std::size_t>(std::max<int>(nvar_, i + 1))));
}

double Jet::d(int i, int j) const {
  std::array<int, kMaxJetVars> a{};
  a[static_cast<std::size_t>(i)] += 1;
  a[static_cast<std::size_t>(j)] += 1;
  return partial(std::span<const int>(a.data(), static_cast<std::size_t>(std::max({int{nvar_}, i + 1, j + 1}))));
}

double Jet::d(int i, int j, int k) const {
  std::array<int, kMaxJetVars> a{};
  a[static_cast<std::size_t>(i)] += 1;
  a[static_cast<std::size_t>(j)] += 1;
  a[static_cast<std::size_t>(k)] += 1;
  return partial(
      std::span<const int>(a.data(), static_cast<std::size_t>(std::max({int{nvar_}, i + 1, j + 1, k + 1}))));
}

Jet Jet::derivative(int var) const {
  if (nvar_ == 0) {
    Jet z;
    z.order_ = order_;
    return z;
  }
  if (order_ == 0) throw CapabilityError("jet: cannot differentiate a jet of order 0");
  const auto& t = table(nvar_);
  Jet r = zero(nvar_, order_ - 1);
  const auto& d = t.deriv[static_cast<std::size_t>(var)];
  const int n = r.size();
  for (int i = 0; i < n; ++i) {
    const auto& e = d[static_cast<std::size_t>(i)];
    r.c_[static_cast<std::size_t>(i)] = e.factor * c_[static_cast<std::size_t>(e.src)];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r = zero(nvar_, order);
  const int n = r.size();
  for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
  return r;
}

Jet Jet::drop_variable(int var) const {
  if (nvar_ == 0) return *this;
  const auto& map = table(nvar_).drop[static_cast<std::size_t>(var)];
  Jet r = zero(nvar_ - 1, order_);
  if (r.nvar_ == 0) r.order_ = kMaxJetOrder;
  const int n = jet_size(nvar_ - 1, order_);
  for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])];
  return r;
}

void Jet::require_compatible(const Jet& o) const {
  if (nvar_ != 0 && o.nvar_ != 0 && nvar_ != o.nvar_) {
    throw CapabilityError("jet: mixing jets over different numbers of variables");
  }
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.nvar_ == 0) {
    c_[0] += o.c_[0];
    if (nvar_ == 0) order_ = std::min(order_, o.order_);
    return *this;
  }
  if (nvar_ == 0) {
    const double v = c_[0];
    *this = o;
    c_[0] += v;
    return *this;
  }
  require_compatible(o);
  order_ = std::min(order_, o.order_);
  const int n = size();
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.nvar_ == 0) {
    c_[0] -= o.c_[0];
    if (nvar_ == 0) order_ = std::min(order_, o.order_);
    return *this;
  }
  if (nvar_ == 0) {
    const double v = c_[0];
    *this = -o;
    c_[0] += v;
    return *this;
  }
  require_compatible(o);
  order_ = std::min(order_, o.order_);
  const int n = size();
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
  return *this;
}

Jet& Jet::operator*=(double s) {
  const int n = size();
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  const int n = size();
  for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)] = -r.c_[static_cast<std::size_t>(i)];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (b.nvar_ == 0) {
    Jet r = a * b.c_[0];
    if (a.nvar_ == 0) r.order_ = std::min(a.order_, b.order_);
    return r;
  }
  if (a.nvar_ == 0) return b * a.c_[0];
  a.require_compatible(b);
  const int order = std::min(a.order_, b.order_);
  Jet r = Jet::zero(a.nvar_, order);
  const auto& prods = table(a.nvar_).products[static_cast<std::size_t>(order)];
  for (const auto& t : prods) {
    r.c_[static_cast<std::size_t>(t.out)] += a.c_[static_cast<std::size_t>(t.a)] * b.c_[static_cast<std::size_t>(t.b)];
  }
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.nvar_ == 0) return a * (1.0 / b.c_[0]);
  return a * reciprocal(b);
}

Jet operator/(double a, const Jet& b) { return reciprocal(b) * a; }

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet compose(const Jet& x, std::span<const double> taylor) {
  if (x.is_constant() || x.order() == 0 || taylor.size() == 1) {
    Jet r = x;
    r = Jet(taylor[0]);
    if (!x.is_constant()) {
      Jet z = Jet::zero(x.nvar(), x.order());
      z.coeff(0) = taylor[0];
      return z;
    }
    return r;
  }
  Jet delta = x;
  delta.coeff(0) = 0.0;
  const int k_max = std::min<int>(x.order(), static_cast<int>(taylor.size()) - 1);
  Jet r = Jet::zero(x.nvar(), x.order());
  r.coeff(0) = taylor[static_cast<std::size_t>(k_max)];
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r.coeff(0) += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> t{s, c, -s / 2.0, -c / 6.0};
  return compose(x, t);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> t{c, -s, -c / 2.0, s / 6.0};
  return compose(x, t);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  const std::array<double, 4> t{e, e, e / 2.0, e / 6.0};
  return compose(x, t);
}

Jet log(const Jet& x) {
  const double v = x.value();
  if (!(v > 0.0)) throw DomainError("jet log: non-positive argument");
  const std::array<double, 4> t{std::log(v), 1.0 / v, -1.0 / (2.0 * v * v), 1.0 / (3.0 * v * v * v)};
  return compose(x, t);
}

Jet pow(const Jet& x, double p) {
  const double v = x.value();
  std::array<double, 4> t{};
  double coef = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    t[static_cast<std::size_t>(k)] = coef * std::pow(v, p - k);
    coef *= (p - k) / (k + 1);
  }
  return compose(x, t);
}

Jet sqrt(const Jet& x) {
  if (!(x.value() > 0.0)) {
    if (x.is_constant() && x.value() == 0.0) return Jet(0.0);
    throw DomainError("jet sqrt: non-positive argument");
  }
  return pow(x, 0.5);
}

Jet ipow(const Jet& x, int p) {
  if (p < 0) return reciprocal(ipow(x, -p));
  Jet r(1.0);
  Jet base = x;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return r;
}

Jet reciprocal(const Jet& x) {
  const double v = x.value();
  if (v == 0.0) throw DomainError("jet reciprocal: division by zero");
  const double iv = 1.0 / v;
  const std::array<double, 4> t{iv, -iv * iv, iv * iv * iv, -iv * iv * iv * iv};
  return compose(x, t);
}

}  // namespace einlab
