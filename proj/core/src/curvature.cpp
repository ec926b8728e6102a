#include "einlab/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "einlab/error.hpp"

namespace einlab {

LocalGeometry local_geometry(const JTensor& g_jets) {
  LocalGeometry geo;
  const int n = g_jets.dim();
  geo.n = n;
  geo.g = g_jets;
  geo.ginv = inverse_spd(g_jets);
  const int order = min_order(g_jets);
  if (order < 1) return geo;

  JTensor dg(n, 3);  // dg(i, j, l) = d_l g_ij
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        dg(i, j, l) = g_jets(i, j).derivative(l);
        dg(j, i, l) = dg(i, j, l);
      }
  JTensor lower(n, 3);  // Gamma_{l i j} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        lower(l, i, j) = 0.5 * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
        lower(l, j, i) = lower(l, i, j);
      }
  geo.christoffel = JTensor(n, 3);
  const JTensor ginv = truncated(geo.ginv, order - 1);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * lower(l, i, j);
        geo.christoffel(k, i, j) = s;
        geo.christoffel(k, j, i) = s;
      }
  if (order < 2) return geo;

  const JTensor& G = geo.christoffel;
  JTensor up(n, 4);  // R^e_{abc} stored at (a, b, c, e)
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          Jet s = G(e, b, c).derivative(a) - G(e, a, c).derivative(b);
          for (int f = 0; f < n; ++f) s += G(e, a, f) * G(f, b, c) - G(e, b, f) * G(f, a, c);
          up(a, b, c, e) = s;
          up(b, a, c, e) = -s;
        }
  geo.riemann = JTensor(n, 4);
  const JTensor g2 = truncated(g_jets, order - 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet s(0.0);
          for (int e = 0; e < n; ++e) s += g2(d, e) * up(a, b, c, e);
          geo.riemann(a, b, c, d) = s;
          geo.riemann(b, a, c, d) = -s;
        }
  geo.ricci = JTensor(n, 2);
  for (int b = 0; b < n; ++b)
    for (int c = b; c < n; ++c) {
      Jet s(0.0);
      for (int a = 0; a < n; ++a) s += up(a, b, c, a);
      // Symmetrize: the two halves agree analytically.
      Jet t(0.0);
      for (int a = 0; a < n; ++a) t += up(a, c, b, a);
      geo.ricci(b, c) = 0.5 * (s + t);
      geo.ricci(c, b) = geo.ricci(b, c);
    }
  geo.scalar = trace(geo.ricci, geo.ginv);
  return geo;
}

LocalGeometry local_geometry(const MetricField& g, std::span<const double> x, int order) {
  return local_geometry(g.metric_jets(x, order));
}

Tensor christoffel(const MetricField& g, std::span<const double> x) {
  return values(local_geometry(g, x, 1).christoffel);
}

Tensor riemann(const MetricField& g, std::span<const double> x) { return values(local_geometry(g, x, 2).riemann); }

Tensor ricci(const MetricField& g, std::span<const double> x) { return values(local_geometry(g, x, 2).ricci); }

double scalar_curv(const MetricField& g, std::span<const double> x) { return local_geometry(g, x, 2).scalar.value(); }

double einstein_residual(const MetricField& g, double lambda, std::span<const std::vector<double>> points) {
  double worst = 0.0;
  for (const auto& x : points) {
    const auto geo = local_geometry(g, x, 2);
    const int n = geo.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double r = geo.ricci(i, j).value() - (n - 1) * lambda * geo.g(i, j).value();
        worst = std::max(worst, std::abs(r));
      }
  }
  return worst;
}

JTensor covariant_derivative(const JTensor& t, const LocalGeometry& geo) {
  const int n = geo.n;
  const int r = t.rank();
  if (geo.christoffel.empty()) throw CapabilityError("covariant derivative needs the connection");
  const int order = std::min(min_order(t), min_order(geo.christoffel) + 1);
  if (order < 1) throw CapabilityError("covariant derivative of a tensor with no derivative information");
  JTensor out(n, r + 1);
  const std::size_t base = t.size();
  const JTensor G = truncated(geo.christoffel, order - 1);
  for (std::size_t flat = 0; flat < base; ++flat) {
    // Decode the multi-index of the input entry.
    std::array<int, 4> idx{};
    std::size_t rem = flat;
    for (int a = r - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    for (int k = 0; k < n; ++k) {
      Jet s = t[flat].truncated(order).derivative(k);
      for (int a = 0; a < r; ++a) {
        const int ia = idx[static_cast<std::size_t>(a)];
        std::size_t stride = 1;
        for (int b = r - 1; b > a; --b) stride *= static_cast<std::size_t>(n);
        const std::size_t without = flat - static_cast<std::size_t>(ia) * stride;
        for (int m = 0; m < n; ++m) {
          s -= G(m, k, ia) * t[without + static_cast<std::size_t>(m) * stride];
        }
      }
      out[flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = s;
    }
  }
  return out;
}

Jet trace(const JTensor& t, const JTensor& ginv) {
  const int n = t.dim();
  Jet s(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv(i, j) * t(i, j);
  return s;
}

JTensor raise(const JTensor& v, const JTensor& ginv) {
  const int n = v.dim();
  JTensor out(n, 1);
  for (int i = 0; i < n; ++i) {
    Jet s(0.0);
    for (int j = 0; j < n; ++j) s += ginv(i, j) * v(j);
    out(i) = s;
  }
  return out;
}

JTensor lower(const JTensor& v, const JTensor& g) { return raise(v, g); }

Jet inner(const JTensor& a, const JTensor& b, const JTensor& ginv) {
  const int n = a.dim();
  JTensor ab(n, 2);  // a_i^l = a_ij g^{jl}
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      Jet s(0.0);
      for (int j = 0; j < n; ++j) s += a(i, j) * ginv(j, l);
      ab(i, l) = s;
    }
  Jet s(0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Jet t(0.0);
      for (int l = 0; l < n; ++l) t += ab(i, l) * b(k, l);
      s += ginv(i, k) * t;
    }
  return s;
}

double norm(const Tensor& t, const Tensor& ginv) {
  const int n = t.dim();
  double s = 0.0;
  if (t.rank() == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ginv(i, j) * t(i) * t(j);
  } else if (t.rank() == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += ginv(i, k) * ginv(j, l) * t(i, j) * t(k, l);
  } else {
    throw DomainError("norm supports rank 1 and 2 tensors");
  }
  return std::sqrt(std::max(s, 0.0));
}

DirectionalDerivative fd_directional(const std::function<std::vector<double>(double)>& quantity, double h) {
  auto central = [&](double step) {
    std::vector<double> p;
    std::vector<double> m;
    try {
      p = quantity(step);
      m = quantity(-step);
    } catch (const Error& e) {
      throw StencilError(std::string("directional stencil not evaluable: ") + e.what());
    }
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (p[i] - m[i]) / (2.0 * step);
    return p;
  };
  const auto d1 = central(h);
  const auto d2 = central(h / 2.0);
  const auto d4 = central(h / 4.0);
  DirectionalDerivative out;
  out.value.resize(d1.size());
  out.error_estimate.resize(d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const double r1 = (4.0 * d2[i] - d1[i]) / 3.0;
    const double r2 = (4.0 * d4[i] - d2[i]) / 3.0;
    out.value[i] = (16.0 * r2 - r1) / 15.0;
    out.error_estimate[i] = std::abs(out.value[i] - r2);
  }
  return out;
}

DirectionalDerivative fd_directional(const MetricField& g, const SymTensorField& h,
                                     const std::function<std::vector<double>(const MetricField&)>& quantity,
                                     double step) {
  return fd_directional(
      [&](double s) {
        const MetricField gs(g + s * h, std::nullopt, g.name());
        return quantity(gs);
      },
      step);
}

std::vector<double> flatten(const Tensor& t) { return t.data(); }

}  // namespace einlab
