#include "einlab/metrics.hpp"

#include <numbers>

#include "einlab/error.hpp"

namespace einlab {

void sphere_embedding(std::span<const Jet> angles, std::span<Jet> u, JTensor* du) {
  const int k = static_cast<int>(angles.size());
  if (k < 1) throw DomainError("sphere embedding needs at least one angle");
  if (k == 1) {
    const Jet c = cos(angles[0]);
    const Jet s = sin(angles[0]);
    u[0] = c;
    u[1] = s;
    if (du) {
      (*du)(0, 0) = -s;
      (*du)(0, 1) = c;
    }
    return;
  }
  std::vector<Jet> v(static_cast<std::size_t>(k));
  JTensor dv(k, 2);
  sphere_embedding(angles.subspan(1), v, du ? &dv : nullptr);
  const Jet st = sin(angles[0]);
  const Jet ct = cos(angles[0]);
  for (int a = 0; a < k; ++a) u[static_cast<std::size_t>(a)] = st * v[static_cast<std::size_t>(a)];
  u[static_cast<std::size_t>(k)] = ct;
  if (du) {
    for (int a = 0; a < k; ++a) (*du)(0, a) = ct * v[static_cast<std::size_t>(a)];
    (*du)(0, k) = -st;
    for (int j = 0; j + 1 < k; ++j) {
      for (int a = 0; a < k; ++a) (*du)(j + 1, a) = st * dv(j, a);
      (*du)(j + 1, k) = Jet(0.0);
    }
  }
}

void fill_round_sphere(std::span<const Jet> angles, const Jet& radius_sq, JTensor& out, int offset) {
  Jet w = radius_sq;
  const int k = static_cast<int>(angles.size());
  for (int i = 0; i < k; ++i) {
    out(offset + i, offset + i) = w;
    for (int j = i + 1; j < k; ++j) out(offset + i, offset + j) = Jet(0.0);
    if (i + 1 < k) {
      const Jet s = sin(angles[static_cast<std::size_t>(i)]);
      w = w * s * s;
    }
  }
}

CoordinateMap spherical_map(int n) {
  CoordinateMap m;
  m.dim = n;
  m.eval = [n](std::span<const Jet> x, std::span<Jet> y, JTensor& jac) {
    std::vector<Jet> u(static_cast<std::size_t>(n));
    JTensor du(n, 2);
    sphere_embedding(x.subspan(1), u, &du);
    for (int a = 0; a < n; ++a) {
      y[static_cast<std::size_t>(a)] = x[0] * u[static_cast<std::size_t>(a)];
      jac(0, a) = u[static_cast<std::size_t>(a)];
      for (int j = 0; j + 1 < n; ++j) jac(j + 1, a) = x[0] * du(j, a);
    }
  };
  return m;
}

ScalarField pullback(const CoordinateMap& map, const ScalarField& cartesian) {
  const int n = map.dim;
  return ScalarField(Field::analytic(n, 1, [map, cartesian, n](std::span<const Jet> x, std::span<Jet> out) {
    std::vector<Jet> y(static_cast<std::size_t>(n));
    JTensor jac(n, 2);
    map.eval(x, y, jac);
    out[0] = cartesian.apply(y);
  }));
}

SymTensorField pullback(const CoordinateMap& map, const SymTensorField& cartesian) {
  const int n = map.dim;
  return SymTensorField::analytic(n, [map, cartesian, n](std::span<const Jet> x, JTensor& out) {
    std::vector<Jet> y(static_cast<std::size_t>(n));
    JTensor jac(n, 2);
    map.eval(x, y, jac);
    const JTensor h = cartesian.apply(y);
    JTensor hj(n, 2);  // hj(i, b) = jac(i, a) h_ab
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) {
        Jet s(0.0);
        for (int a = 0; a < n; ++a) s += jac(i, a) * h(a, b);
        hj(i, b) = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s(0.0);
        for (int b = 0; b < n; ++b) s += hj(i, b) * jac(j, b);
        out(i, j) = s;
      }
  });
}

VectorField pullback(const CoordinateMap& map, const VectorField& cartesian) {
  const int n = map.dim;
  return VectorField::analytic(n, [map, cartesian, n](std::span<const Jet> x, std::span<Jet> out) {
    std::vector<Jet> y(static_cast<std::size_t>(n));
    JTensor jac(n, 2);
    map.eval(x, y, jac);
    const JTensor v = cartesian.apply(y);
    JTensor gram(n, 2);
    JTensor proj(n, 1);
    for (int i = 0; i < n; ++i) {
      Jet p(0.0);
      for (int a = 0; a < n; ++a) p += jac(i, a) * v(a);
      proj(i) = p;
      for (int j = i; j < n; ++j) {
        Jet s(0.0);
        for (int a = 0; a < n; ++a) s += jac(i, a) * jac(j, a);
        gram(i, j) = s;
        gram(j, i) = s;
      }
    }
    const JTensor ginv = inverse_spd(gram);
    for (int i = 0; i < n; ++i) {
      Jet s(0.0);
      for (int j = 0; j < n; ++j) s += ginv(i, j) * proj(j);
      out[static_cast<std::size_t>(i)] = s;
    }
  });
}

MetricField euclidean_metric(int n) {
  return MetricField(SymTensorField::analytic(n,
                                              [n](std::span<const Jet>, JTensor& out) {
                                                for (int i = 0; i < n; ++i)
                                                  for (int j = i; j < n; ++j) out(i, j) = Jet(i == j ? 1.0 : 0.0);
                                              }),
                     0.0, "euclidean");
}

MetricField euclidean_spherical(int n) {
  return MetricField(SymTensorField::analytic(n,
                                              [n](std::span<const Jet> x, JTensor& out) {
                                                for (int i = 0; i < n; ++i)
                                                  for (int j = i; j < n; ++j) out(i, j) = Jet(0.0);
                                                out(0, 0) = Jet(1.0);
                                                fill_round_sphere(x.subspan(1), x[0] * x[0], out, 1);
                                              }),
                     0.0, "euclidean-spherical");
}

MetricField round_sphere(int k, double radius) {
  return MetricField(SymTensorField::analytic(k,
                                              [k, radius](std::span<const Jet> x, JTensor& out) {
                                                for (int i = 0; i < k; ++i)
                                                  for (int j = i; j < k; ++j) out(i, j) = Jet(0.0);
                                                fill_round_sphere(x, Jet(radius * radius), out, 0);
                                              }),
                     k >= 2 ? std::optional<double>(1.0 / (radius * radius)) : std::nullopt, "round-sphere");
}

MetricField hyperbolic_ball_spherical(int n) {
  return MetricField(SymTensorField::analytic(n,
                                              [n](std::span<const Jet> x, JTensor& out) {
                                                if (!(x[0].value() < 1.0)) {
                                                  throw DomainError("Poincare ball evaluated at r >= 1");
                                                }
                                                const Jet c = 2.0 / (1.0 - x[0] * x[0]);
                                                const Jet c2 = c * c;
                                                for (int i = 0; i < n; ++i)
                                                  for (int j = i; j < n; ++j) out(i, j) = Jet(0.0);
                                                out(0, 0) = c2;
                                                fill_round_sphere(x.subspan(1), c2 * x[0] * x[0], out, 1);
                                              }),
                     -1.0, "hyperbolic-ball");
}

MetricField hyperbolic_ball_cartesian(int n) {
  return MetricField(SymTensorField::analytic(n,
                                              [n](std::span<const Jet> y, JTensor& out) {
                                                Jet r2(0.0);
                                                for (const auto& v : y) r2 += v * v;
                                                if (!(r2.value() < 1.0)) {
                                                  throw DomainError("Poincare ball evaluated at |y| >= 1");
                                                }
                                                const Jet c = 2.0 / (1.0 - r2);
                                                const Jet c2 = c * c;
                                                for (int i = 0; i < n; ++i)
                                                  for (int j = i; j < n; ++j) out(i, j) = i == j ? c2 : Jet(0.0);
                                              }),
                     -1.0, "hyperbolic-ball-cartesian");
}

MetricField product_boundary_metric(int n, double ell, double f_s, double s) {
  if (n < 3) throw UnsupportedDimensionError("product boundary needs n >= 3");
  if (!(f_s > 0.0)) throw DegenerateMetricError("product boundary metric needs f(s) > 0");
  const int k = n - 1;
  return MetricField(SymTensorField::analytic(k,
                                              [k, ell, f_s, s](std::span<const Jet> x, JTensor& out) {
                                                for (int i = 0; i < k; ++i)
                                                  for (int j = i; j < k; ++j) out(i, j) = Jet(0.0);
                                                out(0, 0) = Jet(4.0 * ell * ell * f_s);
                                                fill_round_sphere(x.subspan(1), Jet(s * s), out, 1);
                                              }),
                     std::nullopt, "product-boundary");
}

namespace {
std::vector<std::pair<double, double>> spherical_box(int n, double r0, double r1) {
  std::vector<std::pair<double, double>> box{{r0, r1}};
  for (int i = 0; i + 2 < n; ++i) box.emplace_back(0.0, std::numbers::pi);
  box.emplace_back(0.0, 2.0 * std::numbers::pi);
  return box;
}
std::vector<CoordKind> spherical_kinds(int n) {
  std::vector<CoordKind> k{CoordKind::interval};
  for (int i = 0; i + 2 < n; ++i) k.push_back(CoordKind::polar);
  k.push_back(CoordKind::periodic);
  return k;
}
}  // namespace

Chart ball_chart(int n, double radius) {
  return Chart(spherical_box(n, 0.0, radius), spherical_kinds(n), {Face{0, radius, 1}});
}

Chart annulus_chart(int n, double a, double b) {
  return Chart(spherical_box(n, a, b), spherical_kinds(n), {Face{0, a, -1}, Face{0, b, 1}});
}

QuadraticPoly QuadraticPoly::random(int n, Rng& rng) {
  QuadraticPoly p;
  p.n = n;
  const int count = 1 + n + n * (n + 1) / 2;
  p.coeffs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) p.coeffs.push_back(rng.uniform());
  return p;
}

Jet QuadraticPoly::operator()(std::span<const Jet> y) const {
  std::size_t c = 0;
  Jet s(coeffs[c++]);
  for (int i = 0; i < n; ++i) s += coeffs[c++] * y[static_cast<std::size_t>(i)];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s += coeffs[c++] * (y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]);
  return s;
}

ScalarField random_scalar(int n, Rng& rng) {
  const auto p = QuadraticPoly::random(n, rng);
  return ScalarField::analytic(n, [p](std::span<const Jet> y) { return p(y); });
}

VectorField random_vector(int n, Rng& rng) {
  std::vector<QuadraticPoly> ps;
  for (int i = 0; i < n; ++i) ps.push_back(QuadraticPoly::random(n, rng));
  return VectorField::analytic(n, [ps](std::span<const Jet> y, std::span<Jet> out) {
    for (std::size_t i = 0; i < ps.size(); ++i) out[i] = ps[i](y);
  });
}

SymTensorField random_sym_tensor(int n, Rng& rng) {
  std::vector<QuadraticPoly> ps;
  for (int i = 0; i < sym_size(n); ++i) ps.push_back(QuadraticPoly::random(n, rng));
  return SymTensorField::analytic(n, [ps, n](std::span<const Jet> y, JTensor& out) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out(i, j) = ps[static_cast<std::size_t>(sym_index(i, j, n))](y);
  });
}

}  // namespace einlab
