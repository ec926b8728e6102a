#include "einlab/schwarzschild.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "einlab/error.hpp"
#include "einlab/metrics.hpp"

namespace einlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}
}  // namespace

double SchwarzschildParams::lambda_bound() const {
  return std::pow(n - 3.0, n - 3.0) / std::pow(n - 1.0, n - 1.0);
}

void SchwarzschildParams::validate() const {
  if (n < 4) throw UnsupportedDimensionError("Schwarzschild family needs n >= 4, got n = " + std::to_string(n));
  if (!(m > 0.0) || !std::isfinite(m)) throw ParameterError("mass must satisfy m > 0, got m = " + fmt(m));
  if (!std::isfinite(lambda)) throw ParameterError("Lambda must be finite");
  if (lambda > 0.0) {
    const double lhs = m * m * std::pow(lambda, n - 3.0);
    const double rhs = lambda_bound();
    if (!(lhs < rhs)) {
      throw ParameterError("m^2 Lambda^(n-3) < (n-3)^(n-3)/(n-1)^(n-1) violated: " + fmt(lhs) + " >= " + fmt(rhs));
    }
  }
}

bool SchwarzschildParams::valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

SchwarzschildParams make_params(int n, double lambda, double m) {
  SchwarzschildParams p{n, lambda, m};
  p.validate();
  return p;
}

double f_of_r(const SchwarzschildParams& p, double r) {
  return 1.0 - 2.0 * p.m * std::pow(r, 3.0 - p.n) - p.lambda * r * r;
}

double f_prime(const SchwarzschildParams& p, double r) {
  return 2.0 * p.m * (p.n - 3.0) * std::pow(r, 2.0 - p.n) - 2.0 * p.lambda * r;
}

namespace {

// f(lo) < 0 < f(hi) or the reverse; bisect then polish with Newton.
double solve_root(const SchwarzschildParams& p, double lo, double hi) {
  double flo = f_of_r(p, lo);
  if (flo * f_of_r(p, hi) > 0.0) throw NumericError("root bracket does not change sign");
  while ((hi - lo) > 1e-8 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f_of_r(p, mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double r = 0.5 * (lo + hi);
  double best = r;
  double best_f = std::abs(f_of_r(p, r));
  for (int it = 0; it < 30 && best_f > 0.0; ++it) {
    const double step = f_of_r(p, r) / f_prime(p, r);
    r -= step;
    const double fr = std::abs(f_of_r(p, r));
    if (fr < best_f) {
      best_f = fr;
      best = r;
    }
    if (std::abs(step) < 1e-16 * std::abs(r)) break;
  }
  return best;
}

}  // namespace

RootData roots(const SchwarzschildParams& p) {
  p.validate();
  RootData rd;
  const int n = p.n;
  const double base = std::pow(2.0 * p.m, 1.0 / (n - 3.0));  // root when Lambda = 0
  if (p.lambda == 0.0) {
    rd.r0 = base;
    rd.r1 = kInf;
  } else if (p.lambda < 0.0) {
    // f is increasing; f(base) = -Lambda base^2 > 0.
    double lo = base;
    while (f_of_r(p, lo) >= 0.0) lo *= 0.5;
    rd.r0 = solve_root(p, lo, base);
    rd.r1 = kInf;
  } else {
    const double rstar = std::pow(p.m * (n - 3.0) / p.lambda, 1.0 / (n - 1.0));
    rd.rstar = rstar;
    if (!(f_of_r(p, rstar) > 0.0)) throw NumericError("f(r*) is not positive");
    double lo = rstar;
    while (f_of_r(p, lo) >= 0.0) lo *= 0.5;
    double hi = rstar;
    while (f_of_r(p, hi) >= 0.0) hi *= 2.0;
    rd.r0 = solve_root(p, lo, rstar);
    rd.r1 = solve_root(p, rstar, hi);
    rd.ell_hat = -1.0 / ((n - 3.0) / rd.r1 - (n - 1.0) * p.lambda * rd.r1);
  }
  rd.ell = 1.0 / ((n - 3.0) / rd.r0 - (n - 1.0) * p.lambda * rd.r0);
  return rd;
}

MetricField schwarzschild_metric(const SchwarzschildParams& p, const RootData& rd) {
  const int n = p.n;
  const double m = p.m;
  const double lam = p.lambda;
  const double r0 = rd.r0;
  const double r1 = rd.r1;
  return MetricField(SymTensorField::analytic(n,
                                              [n, m, lam, r0, r1](std::span<const Jet> x, JTensor& out) {
                                                const Jet& r = x[1];
                                                if (!(r.value() > r0) || !(r.value() < r1)) {
                                                  throw DomainError("Schwarzschild chart evaluated outside (r0, r1)");
                                                }
                                                const Jet f = 1.0 - 2.0 * m * pow(r, 3.0 - n) - lam * r * r;
                                                for (int i = 0; i < n; ++i)
                                                  for (int j = i; j < n; ++j) out(i, j) = Jet(0.0);
                                                out(0, 0) = f;
                                                out(1, 1) = 1.0 / f;
                                                fill_round_sphere(x.subspan(2), r * r, out, 2);
                                              }),
                     lam, "schwarzschild");
}

Chart schwarzschild_chart(const SchwarzschildParams& p, const RootData& rd, double s) {
  if (!(s > rd.r0) || !(s < rd.r1)) throw DomainError("boundary radius must lie in (r0, r1)");
  std::vector<std::pair<double, double>> box{{0.0, 4.0 * std::numbers::pi * rd.ell}, {rd.r0, s}};
  std::vector<CoordKind> kinds{CoordKind::periodic, CoordKind::interval};
  for (int i = 0; i + 3 < p.n; ++i) {
    box.emplace_back(0.0, std::numbers::pi);
    kinds.push_back(CoordKind::polar);
  }
  box.emplace_back(0.0, 2.0 * std::numbers::pi);
  kinds.push_back(CoordKind::periodic);
  return Chart(std::move(box), std::move(kinds), {Face{1, s, 1}});
}

// ------------------------------------------------------------------ criterion

namespace {
void check_s_range(const RootData& rd, double s) {
  if (!(s >= rd.r0 * (1.0 - 1e-14)) || !(s < rd.r1)) {
    throw DomainError("s = " + fmt(s) + " outside [r0, r1) = [" + fmt(rd.r0) + ", " + fmt(rd.r1) + ")");
  }
}
}  // namespace

double p_of_s_with_period(const SchwarzschildParams& p, double ell, double s) {
  return s * s - 4.0 * (p.n - 3.0) * ell * ell * f_of_r(p, s);
}

double p_of_s(const SchwarzschildParams& p, double s) {
  const RootData rd = roots(p);
  check_s_range(rd, s);
  return p_of_s_with_period(p, rd.ell, s);
}

std::optional<double> s_crit_with_period(const SchwarzschildParams& p, double ell) {
  const double k = p.n - 3.0;
  const double lead = 1.0 + 4.0 * k * ell * ell * p.lambda;
  if (!(lead > 0.0)) return std::nullopt;
  // p'(s) = 2 s lead - 8 (n-3)^2 ell^2 m s^{2-n}
  return std::pow(4.0 * k * k * ell * ell * p.m / lead, 1.0 / (p.n - 1.0));
}

std::optional<double> s_crit(const SchwarzschildParams& p) { return s_crit_with_period(p, roots(p).ell); }

RangeReport classify_range(const SchwarzschildParams& p, const std::vector<double>& s_grid, std::optional<double> ell) {
  const RootData rd = roots(p);
  RangeReport rep;
  rep.r0 = rd.r0;
  rep.r1 = rd.r1;
  rep.ell = ell.value_or(rd.ell);
  const double k = p.n - 3.0;
  rep.leading = 1.0 + 4.0 * k * rep.ell * rep.ell * p.lambda;
  rep.threshold = -1.0 / (4.0 * k * rep.ell * rep.ell);
  auto pv = [&](double s) { return p_of_s_with_period(p, rep.ell, s); };

  // p(r0) = r0^2 > 0; p' at r0 is finite, so positivity persists on a
  // neighbourhood. The sample at r0 (1 + 1e-6) confirms it numerically.
  rep.near_r0_positive = pv(rd.r0) > 0.0 && pv(rd.r0 * (1.0 + 1e-6)) > 0.0;
  if (p.lambda <= 0.0) {
    // p(s) = lead s^2 - 4(n-3) ell^2 + 8(n-3) ell^2 m s^{3-n}.
    rep.large_s_positive = rep.leading > 0.0;
  } else {
    rep.near_r1_positive = pv(rd.r1) > 0.0 && pv(rd.r1 * (1.0 - 1e-9)) > 0.0;
  }
  rep.s_c = s_crit_with_period(p, rep.ell);
  if (rep.leading > 0.0) {
    // p is convex on (0, inf); its minimum over [r0, r1) sits at s_c or an end.
    const double sc = *rep.s_c;
    if (sc <= rd.r0) {
      rep.global_positive = true;
    } else if (sc >= rd.r1) {
      rep.global_positive = pv(rd.r1) > 0.0;
    } else {
      rep.global_positive = pv(sc) > 0.0;
    }
  } else {
    rep.global_positive = false;  // p decreases to -inf (Lambda < 0) or to -4(n-3) ell^2
  }
  rep.grid_min_p = kInf;
  for (double s : s_grid) {
    if (!(s >= rd.r0 * (1.0 - 1e-14)) || !(s < rd.r1)) continue;
    const double v = pv(s);
    rep.s_grid.push_back(s);
    rep.p_values.push_back(v);
    if (v < rep.grid_min_p) {
      rep.grid_min_p = v;
      rep.grid_argmin = s;
    }
  }
  return rep;
}

double mode_eigenvalue(const SchwarzschildParams& p, const RootData& rd, double s, int i, int k) {
  const double f = std::max(f_of_r(p, s), 0.0);
  const double sphere = (k * (k + p.n - 3.0) - (p.n - 3.0)) / (s * s);
  if (i == 0) return sphere;
  if (f == 0.0) return kInf;  // the circle has collapsed at s = r0
  return i * i / (4.0 * rd.ell * rd.ell * f) + sphere;
}

std::vector<SpectrumEntry> spectrum(const SchwarzschildParams& p, double s, int i_max, int k_max) {
  if (i_max < 2 || k_max < 2) throw ParameterError("spectrum cutoffs must be at least 2");
  const RootData rd = roots(p);
  check_s_range(rd, s);
  std::vector<SpectrumEntry> out;
  for (int i = 0; i <= i_max; ++i)
    for (int k = 0; k <= k_max; ++k) out.push_back({i, k, mode_eigenvalue(p, rd, s, i, k)});
  std::stable_sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    if (a.i != b.i) return a.i < b.i;
    return a.k < b.k;
  });
  return out;
}

std::string to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::nondegenerate:
      return "nondegenerate";
    case BoundaryClass::degenerate:
      return "degenerate";
    case BoundaryClass::boundary_case:
      return "boundary-case";
  }
  return "unknown";
}

NondegeneracyReport nondegenerate(const SchwarzschildParams& p, double s, double band) {
  const RootData rd = roots(p);
  check_s_range(rd, s);
  NondegeneracyReport rep;
  rep.p = p_of_s_with_period(p, rd.ell, s);
  rep.first_eigenvalue = mode_eigenvalue(p, rd, s, 0, 0);
  // Every mode with k >= 1 is at least the k = 1, i = 0 one, and i >= 1
  // modes are at least the i = 1, k = 0 one; the minimum is one of the two.
  const double l10 = mode_eigenvalue(p, rd, s, 1, 0);
  const double l01 = mode_eigenvalue(p, rd, s, 0, 1);
  if (l10 <= l01) {
    rep.second_eigenvalue = l10;
    rep.second_i = 1;
  } else {
    rep.second_eigenvalue = l01;
    rep.second_k = 1;
  }
  if (std::abs(rep.p) <= band) {
    rep.cls = BoundaryClass::boundary_case;
    return rep;
  }
  rep.cls = rep.second_eigenvalue > 0.0 ? BoundaryClass::nondegenerate : BoundaryClass::degenerate;
  const bool p_positive = rep.p > 0.0;
  if (p_positive != (rep.cls == BoundaryClass::nondegenerate)) {
    throw ConsistencyError("spectral classification disagrees with p(s) at s = " + fmt(s) + ": p = " + fmt(rep.p) +
                           ", second eigenvalue = " + fmt(rep.second_eigenvalue));
  }
  return rep;
}

double sigma_mean_curvature(const SchwarzschildParams& p, double s) {
  const double f = f_of_r(p, s);
  if (!(f > 0.0)) throw DomainError("mean curvature needs f(s) > 0");
  const double sf = std::sqrt(f);
  return (p.n - 2.0) * sf / s + f_prime(p, s) / (2.0 * sf);
}

double sigma_scalar_curvature(const SchwarzschildParams& p, double s) { return (p.n - 3.0) * (p.n - 2.0) / (s * s); }

// ---------------------------------------------------------------- desing

namespace {

// Quotient of an ascending-coefficient polynomial by (r - root).
std::vector<double> deflate(const std::vector<double>& c, double root) {
  const std::size_t d = c.size() - 1;
  std::vector<double> q(d);
  double carry = c[d];
  for (std::size_t k = d; k-- > 0;) {
    q[k] = carry;
    carry = c[k] + carry * root;
  }
  return q;
}

double horner(const std::vector<double>& c, double r) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * r + c[k];
  return s;
}

Jet horner(const std::vector<double>& c, const Jet& r) {
  Jet s(0.0);
  for (std::size_t k = c.size(); k-- > 0;) s = s * r + c[k];
  return s;
}

}  // namespace

DesingFunction::DesingFunction(const SchwarzschildParams& p) : p_(p), rd_(roots(p)) {
  const int n = p.n;
  const double r0 = rd_.r0;
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);  // r^{n-3} f(r), degree n - 1
  c[0] -= 2.0 * p.m;
  c[static_cast<std::size_t>(n - 3)] += 1.0;
  c[static_cast<std::size_t>(n - 1)] -= p.lambda;
  deflated_ = deflate(c, r0);
  p_r0_ = (n - 3.0) * std::pow(r0, n - 4.0) - (n - 1.0) * p.lambda * std::pow(r0, n - 2.0);
  // P(r0) is taken from its series limit rather than the deflated quotient,
  // which loses digits to the cancellation in r^{n-3} f(r) near r0.
  if (!(p_r0_ > 0.0)) throw NumericError("deflated polynomial is not positive at r0");
  a_ = std::pow(r0, n - 3.0) / (rd_.ell * p_r0_);

  // N(r) = r^{n-3} P(r0) - r0^{n-3} P(r) vanishes at r0.
  std::vector<double> num(deflated_.size(), 0.0);
  const double r0k = std::pow(r0, n - 3.0);
  for (std::size_t k = 0; k < deflated_.size(); ++k) num[k] = -r0k * deflated_[k];
  num[static_cast<std::size_t>(n - 3)] += p_r0_;
  numer_ = deflate(num, r0);
}

double DesingFunction::deflated(double r) const { return horner(deflated_, r); }

double DesingFunction::b0(double r) const { return horner(numer_, r) / (horner(deflated_, r) * p_r0_); }

Jet DesingFunction::b0_jet(const Jet& r) const { return horner(numer_, r) / (horner(deflated_, r) * p_r0_); }

double DesingFunction::b1(double r) const {
  if (r == rd_.r0) return 0.0;
  if (!(r > rd_.r0) || !(r < rd_.r1)) throw DomainError("desingularizing function is defined on [r0, r1)");
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      [this](double s) { return b0(s); }, rd_.r0, r, 12, 1e-14);
  return v / rd_.ell;
}

std::array<double, 4> DesingFunction::F_taylor(double r) const {
  const Jet rj = Jet::variable(1, 3, 0, r);
  const Jet b0j = b0_jet(rj);
  Jet b1j = Jet::zero(1, 3);
  b1j.coeff(0) = b1(r);
  for (int k = 1; k <= 3; ++k) b1j.coeff(k) = b0j.coeff(k - 1) / (rd_.ell * k);
  const Jet F = (rj - rd_.r0) * exp(b1j);
  return {F.coeff(0), F.coeff(1), F.coeff(2), F.coeff(3)};
}

double DesingFunction::F(double r) const { return (r - rd_.r0) * std::exp(b1(r)); }

double DesingFunction::Fprime(double r) const { return F_taylor(r)[1]; }

double DesingFunction::r_of_F(double u) const {
  if (u < 0.0) throw DomainError("F takes nonnegative values only");
  if (u == 0.0) return rd_.r0;
  const double r0 = rd_.r0;
  double lo = r0;
  double hi = r0 + u;  // F'(r0) = 1
  if (!(hi < rd_.r1)) hi = 0.5 * (r0 + rd_.r1);
  while (F(hi) < u) {
    const double next = r0 + 2.0 * (hi - r0);
    if (!(next < rd_.r1)) {
      hi = 0.5 * (hi + rd_.r1);
      if (hi - r0 < 1e-300 || !(F(hi) < u) || hi >= rd_.r1 * (1.0 - 1e-15)) break;
    } else {
      hi = next;
    }
  }
  if (F(hi) < u) throw DomainError("value outside the range of F");
  // safeguarded Newton: bisect whenever the step leaves the bracket or
  // fails to halve the previous one (F grows exponentially for large r)
  double r = 0.5 * (lo + hi);
  double step_old = hi - lo;
  for (int it = 0; it < 200; ++it) {
    const auto t = F_taylor(r);
    const double g = t[0] - u;
    if (g == 0.0) return r;
    if (!(g < 0.0)) hi = r; else lo = r;  // overflow counts as above
    double next = r - g / t[1];
    if (!(next > lo && next < hi) || std::abs(next - r) > 0.5 * step_old) next = 0.5 * (lo + hi);
    step_old = std::abs(next - r);
    if (step_old <= 1e-15 * std::abs(r)) return next;
    r = next;
  }
  return r;
}

DesingFunction desing(const SchwarzschildParams& p) { return DesingFunction(p); }

MetricField desingularized_metric(const DesingFunction& d) {
  const int n = d.params().n;
  const double ell = d.root_data().ell;
  const double lambda = d.params().lambda;
  auto fn = [d, n, ell](std::span<const double> x, int order) {
    const auto xs = coordinate_jets(x, order);
    const Jet u = xs[0] * xs[0] + xs[1] * xs[1];
    const double r = d.r_of_F(u.value());
    const auto t = d.F_taylor(r);
    const double f1 = t[1];
    const double f2 = 2.0 * t[2];
    const double f3 = 6.0 * t[3];
    const double r1 = 1.0 / f1;
    const double r2 = -f2 / (f1 * f1 * f1);
    const double r3 = (3.0 * f2 * f2 - f1 * f3) / std::pow(f1, 5);
    const std::array<double, 4> rt{r, r1, r2 / 2.0, r3 / 6.0};
    const Jet rj = compose(u, rt);
    const std::array<double, 3> fpt{t[1], 2.0 * t[2], 3.0 * t[3]};
    const Jet fp = compose(rj, fpt);
    JTensor g(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(i, j) = Jet(0.0);
    g(0, 0) = 4.0 * ell / fp;
    g(1, 1) = g(0, 0);
    fill_round_sphere(std::span<const Jet>(xs).subspan(2), rj * rj, g, 2);
    std::vector<Jet> out;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out.push_back(g(i, j));
    return out;
  };
  return MetricField(SymTensorField(Field::pointwise(n, sym_size(n), fn, 2)), lambda, "schwarzschild-desingularized");
}

double desingularization_mismatch(const DesingFunction& d, double t, double r, const std::vector<double>& angles) {
  const auto& p = d.params();
  const double ell = d.root_data().ell;
  const double F = d.F(r);
  const double Fp = d.Fprime(r);
  const double sf = std::sqrt(F);
  const double th = t / (2.0 * ell);
  // Jacobian of (t, r) -> (x, y).
  const double xt = -sf * std::sin(th) / (2.0 * ell);
  const double yt = sf * std::cos(th) / (2.0 * ell);
  const double xr = Fp / (2.0 * sf) * std::cos(th);
  const double yr = Fp / (2.0 * sf) * std::sin(th);
  std::vector<double> pt{sf * std::cos(th), sf * std::sin(th)};
  pt.insert(pt.end(), angles.begin(), angles.end());
  const auto g = desingularized_metric(d).values(pt);
  const double c = g(0, 0);
  const double gtt = c * (xt * xt + yt * yt);
  const double grr = c * (xr * xr + yr * yr);
  const double gtr = c * (xt * xr + yt * yr);
  const double f = f_of_r(p, r);
  double worst = std::max({std::abs(gtt - f), std::abs(grr - 1.0 / f) * f, std::abs(gtr)});
  // Sphere block.
  const auto gs = schwarzschild_metric(p, d.root_data());
  std::vector<double> xo{t, r};
  xo.insert(xo.end(), angles.begin(), angles.end());
  const auto go = gs.values(xo);
  for (int i = 2; i < p.n; ++i)
    for (int j = 2; j < p.n; ++j) worst = std::max(worst, std::abs(g(i, j) - go(i, j)));
  return worst;
}

double conical_defect(const SchwarzschildParams& p) {
  const RootData rd = roots(p);
  if (!(p.lambda > 0.0)) return 0.0;
  return std::abs(rd.ell - *rd.ell_hat);
}

SweepRow sweep_point(const SchwarzschildParams& p, double s, double band) {
  const RootData rd = roots(p);
  const auto rep = nondegenerate(p, s, band);
  SweepRow row;
  row.n = p.n;
  row.lambda = p.lambda;
  row.m = p.m;
  row.s = s;
  row.r0 = rd.r0;
  row.r1 = rd.r1;
  row.ell = rd.ell;
  row.p = rep.p;
  row.lambda_min = rep.second_eigenvalue;
  row.cls = rep.cls;
  return row;
}

}  // namespace einlab
