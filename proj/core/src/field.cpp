#include "einlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "einlab/error.hpp"

namespace einlab {

// ---------------------------------------------------------------- Chart

Chart::Chart(std::vector<std::pair<double, double>> b, std::vector<CoordKind> k, std::vector<Face> f)
    : dim(static_cast<int>(b.size())), box(std::move(b)), kinds(std::move(k)), faces(std::move(f)) {
  if (kinds.empty()) kinds.assign(box.size(), CoordKind::interval);
  excluded_caps.assign(box.size(), 0.0);
  validate();
}

void Chart::validate() const {
  if (dim < 2) throw DomainError("chart dimension must be at least 2");
  if (static_cast<int>(box.size()) != dim || static_cast<int>(kinds.size()) != dim) {
    throw DomainError("chart box and coordinate kinds must have one entry per dimension");
  }
  for (const auto& [lo, hi] : box) {
    if (!(lo < hi)) throw DomainError("chart box interval is empty");
  }
  for (const auto& f : faces) {
    if (f.coord < 0 || f.coord >= dim) throw DomainError("face coordinate out of range");
    const auto& [lo, hi] = box[static_cast<std::size_t>(f.coord)];
    if (f.level < lo || f.level > hi) throw DomainError("face level outside the chart box");
    if (f.orientation != 1 && f.orientation != -1) throw DomainError("face orientation must be +1 or -1");
  }
}

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int i = 0; i < dim; ++i) {
    const auto& [lo, hi] = box[static_cast<std::size_t>(i)];
    const double v = x[static_cast<std::size_t>(i)];
    if (kinds[static_cast<std::size_t>(i)] == CoordKind::periodic) continue;
    if (v < lo || v > hi) return false;
    const double cap = excluded_caps.empty() ? 0.0 : excluded_caps[static_cast<std::size_t>(i)];
    if (kinds[static_cast<std::size_t>(i)] == CoordKind::polar && (v < cap || v > std::numbers::pi - cap)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- FD jets

std::vector<Jet> coordinate_jets(std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> out;
  out.reserve(x.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(n, order, i, x[static_cast<std::size_t>(i)]));
  return out;
}

namespace {

struct StencilPoint {
  int offset;  // in half steps
  double weight;
};

std::vector<StencilPoint> stencil_1d(int e) {
  switch (e) {
    case 1:
      return {{-2, -0.5}, {2, 0.5}};
    case 2:
      return {{-2, 1.0}, {0, -2.0}, {2, 1.0}};
    case 3:
      return {{-4, -0.5}, {-2, 1.0}, {2, -1.0}, {4, 0.5}};
    default:
      throw CapabilityError("finite differences support derivative order <= 3 per variable");
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

class StencilCache {
 public:
  StencilCache(const Field::ValueFn& fn, std::span<const double> x, int ncomp, double unit)
      : fn_(fn), x_(x.begin(), x.end()), ncomp_(ncomp), unit_(unit) {}

  const std::vector<double>& at(const std::vector<int>& offsets) {
    auto it = cache_.find(offsets);
    if (it != cache_.end()) return it->second;
    std::vector<double> p = x_;
    for (std::size_t v = 0; v < p.size(); ++v) p[v] += offsets[v] * unit_;
    std::vector<double> out(static_cast<std::size_t>(ncomp_));
    try {
      fn_(p, out);
    } catch (const Error& e) {
      throw StencilError(std::string("finite-difference stencil not evaluable: ") + e.what());
    }
    for (double v : out) {
      if (!std::isfinite(v)) throw StencilError("finite-difference stencil produced a non-finite value");
    }
    return cache_.emplace(offsets, std::move(out)).first->second;
  }

 private:
  const Field::ValueFn& fn_;
  std::vector<double> x_;
  int ncomp_;
  double unit_;
  std::map<std::vector<int>, std::vector<double>> cache_;
};

// Partial derivative alpha with step h; refine = 2 halves the stencil.
std::vector<double> stencil_partial(StencilCache& cache, const std::array<int, kMaxJetVars>& alpha, int dim,
                                    int ncomp, int refine, double h) {
  std::vector<std::vector<StencilPoint>> per_var;
  std::vector<int> vars;
  int deg = 0;
  for (int v = 0; v < dim; ++v) {
    const int e = alpha[static_cast<std::size_t>(v)];
    if (e == 0) continue;
    per_var.push_back(stencil_1d(e));
    vars.push_back(v);
    deg += e;
  }
  std::vector<double> acc(static_cast<std::size_t>(ncomp), 0.0);
  std::vector<std::size_t> pos(per_var.size(), 0);
  std::vector<int> offsets(static_cast<std::size_t>(dim), 0);
  while (true) {
    double w = 1.0;
    std::fill(offsets.begin(), offsets.end(), 0);
    for (std::size_t a = 0; a < per_var.size(); ++a) {
      const auto& sp = per_var[a][pos[a]];
      w *= sp.weight;
      offsets[static_cast<std::size_t>(vars[a])] = sp.offset * (2 / refine);
    }
    const auto& f = cache.at(offsets);
    for (int c = 0; c < ncomp; ++c) acc[static_cast<std::size_t>(c)] += w * f[static_cast<std::size_t>(c)];
    std::size_t a = 0;
    for (; a < pos.size(); ++a) {
      if (++pos[a] < per_var[a].size()) break;
      pos[a] = 0;
    }
    if (a == pos.size()) break;
  }
  const double hk = std::pow(h, deg);
  for (double& v : acc) v /= hk;
  return acc;
}

}  // namespace

std::vector<Jet> finite_difference_jets(const Field::ValueFn& fn, int dim, int ncomp, std::span<const double> x,
                                        int order, double scale) {
  if (order > kMaxJetOrder) throw CapabilityError("finite-difference jets support order <= 3");
  std::vector<Jet> out(static_cast<std::size_t>(ncomp), Jet::zero(dim, order));
  std::vector<double> f0(static_cast<std::size_t>(ncomp));
  fn(x, f0);
  for (int c = 0; c < ncomp; ++c) out[static_cast<std::size_t>(c)].coeff(0) = f0[static_cast<std::size_t>(c)];
  const int n = jet_size(dim, order);
  const double eps = std::numeric_limits<double>::epsilon();
  std::array<std::unique_ptr<StencilCache>, kMaxJetOrder + 1> caches;
  for (int i = 1; i < n; ++i) {
    const auto alpha = jet_monomial(dim, i);
    int deg = 0;
    double afact = 1.0;
    for (int v = 0; v < dim; ++v) {
      deg += alpha[static_cast<std::size_t>(v)];
      afact *= factorial(alpha[static_cast<std::size_t>(v)]);
    }
    const double h = std::pow(eps, 1.0 / (deg + 4)) * scale;
    auto& cache = caches[static_cast<std::size_t>(deg)];
    // Offsets are stored in units of h/4 so both h and h/2 land on the grid.
    if (!cache) cache = std::make_unique<StencilCache>(fn, x, ncomp, h / 4.0);
    const auto coarse = stencil_partial(*cache, alpha, dim, ncomp, 1, h);
    const auto fine = stencil_partial(*cache, alpha, dim, ncomp, 2, h / 2.0);
    for (int c = 0; c < ncomp; ++c) {
      const double d = (4.0 * fine[static_cast<std::size_t>(c)] - coarse[static_cast<std::size_t>(c)]) / 3.0;
      out[static_cast<std::size_t>(c)].coeff(i) = d / afact;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Field

struct Field::Impl {
  int dim = 0;
  int ncomp = 0;
  int max_order = kMaxJetOrder;
  int order_loss = 0;
  DerivativeMode mode = DerivativeMode::exact;
  JetFn jet_fn;
  ValueFn value_fn;
  PointFn point_fn;
  double scale = 1.0;
};

Field Field::analytic(int dim, int ncomp, JetFn fn, int order_loss) {
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->ncomp = ncomp;
  impl->order_loss = order_loss;
  impl->max_order = kMaxJetOrder - order_loss;
  impl->jet_fn = std::move(fn);
  Field f;
  f.impl_ = std::move(impl);
  return f;
}

Field Field::finite_difference(int dim, int ncomp, ValueFn fn, double scale) {
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->ncomp = ncomp;
  impl->mode = DerivativeMode::finite_difference;
  impl->value_fn = std::move(fn);
  impl->scale = scale;
  Field f;
  f.impl_ = std::move(impl);
  return f;
}

Field Field::pointwise(int dim, int ncomp, PointFn fn, int max_order, DerivativeMode mode) {
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->ncomp = ncomp;
  impl->max_order = max_order;
  impl->mode = mode;
  impl->point_fn = std::move(fn);
  Field f;
  f.impl_ = std::move(impl);
  return f;
}

int Field::dim() const { return impl_->dim; }
int Field::components() const { return impl_->ncomp; }
int Field::max_order() const { return impl_->max_order; }
DerivativeMode Field::mode() const { return impl_->mode; }
bool Field::composable() const { return static_cast<bool>(impl_->jet_fn); }

std::vector<Jet> Field::evaluate(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != impl_->dim) throw DomainError("field evaluated at a point of wrong dimension");
  if (order > impl_->max_order) {
    throw CapabilityError("field provides derivatives up to order " + std::to_string(impl_->max_order) +
                          ", requested " + std::to_string(order));
  }
  if (impl_->jet_fn) {
    const auto xs = coordinate_jets(x, order + impl_->order_loss);
    std::vector<Jet> out(static_cast<std::size_t>(impl_->ncomp));
    impl_->jet_fn(xs, out);
    for (auto& j : out) {
      if (j.is_constant()) {
        const double v = j.value();
        j = Jet::zero(impl_->dim, order);
        j.coeff(0) = v;
      } else {
        j = j.truncated(order);
      }
    }
    return out;
  }
  if (impl_->value_fn) return finite_difference_jets(impl_->value_fn, impl_->dim, impl_->ncomp, x, order, impl_->scale);
  auto out = impl_->point_fn(x, order);
  for (auto& j : out) {
    if (j.is_constant()) {
      const double v = j.value();
      j = Jet::zero(impl_->dim, order);
      j.coeff(0) = v;
    } else {
      j = j.truncated(order);
    }
  }
  return out;
}

std::vector<double> Field::values(std::span<const double> x) const {
  if (impl_->value_fn) {
    std::vector<double> out(static_cast<std::size_t>(impl_->ncomp));
    impl_->value_fn(x, out);
    return out;
  }
  const auto jets = evaluate(x, 0);
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(j.value());
  return out;
}

std::vector<Jet> Field::apply(std::span<const Jet> x) const {
  if (!impl_->jet_fn) throw CapabilityError("field is not composable with jets (not analytic)");
  std::vector<Jet> out(static_cast<std::size_t>(impl_->ncomp));
  impl_->jet_fn(x, out);
  return out;
}

Field Field::as_finite_difference(double scale) const {
  Field self = *this;
  return finite_difference(
      dim(), components(),
      [self](std::span<const double> x, std::span<double> out) {
        const auto v = self.values(x);
        std::copy(v.begin(), v.end(), out.begin());
      },
      scale);
}

// ---------------------------------------------------------------- wrappers

ScalarField::ScalarField(Field f) : f_(std::move(f)) {
  if (f_.components() != 1) throw DomainError("scalar field must have one component");
}

ScalarField ScalarField::analytic(int dim, std::function<Jet(std::span<const Jet>)> fn) {
  return ScalarField(Field::analytic(dim, 1, [fn](std::span<const Jet> x, std::span<Jet> out) { out[0] = fn(x); }));
}

ScalarField ScalarField::constant(int dim, double c) {
  return analytic(dim, [c](std::span<const Jet>) { return Jet(c); });
}

VectorField::VectorField(Field f) : f_(std::move(f)) {
  if (f_.components() != f_.dim()) throw DomainError("vector field must have one component per dimension");
}

VectorField VectorField::analytic(int dim, std::function<void(std::span<const Jet>, std::span<Jet>)> fn) {
  return VectorField(Field::analytic(dim, dim, std::move(fn)));
}

namespace {
JTensor to_vector(const std::vector<Jet>& v, int n) {
  JTensor t(n, 1);
  for (int i = 0; i < n; ++i) t(i) = v[static_cast<std::size_t>(i)];
  return t;
}

JTensor unpack(const std::vector<Jet>& packed, int n) {
  JTensor t(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      t(i, j) = packed[static_cast<std::size_t>(sym_index(i, j, n))];
      t(j, i) = t(i, j);
    }
  return t;
}
}  // namespace

JTensor VectorField::jets(std::span<const double> x, int order) const { return to_vector(f_.evaluate(x, order), dim()); }
JTensor VectorField::apply(std::span<const Jet> x) const { return to_vector(f_.apply(x), dim()); }

SymTensorField::SymTensorField(Field packed) : f_(std::move(packed)) {
  if (f_.components() != sym_size(f_.dim())) throw DomainError("symmetric tensor field has wrong component count");
}

SymTensorField SymTensorField::analytic(int dim, Filler fill, int order_loss) {
  return SymTensorField(Field::analytic(
      dim, sym_size(dim),
      [dim, fill](std::span<const Jet> x, std::span<Jet> out) {
        JTensor t(dim, 2);
        fill(x, t);
        for (int i = 0; i < dim; ++i)
          for (int j = i; j < dim; ++j) out[static_cast<std::size_t>(sym_index(i, j, dim))] = t(i, j);
      },
      order_loss));
}

SymTensorField SymTensorField::from_values(int dim, std::function<void(std::span<const double>, Tensor&)> fill,
                                           double scale) {
  return SymTensorField(Field::finite_difference(
      dim, sym_size(dim),
      [dim, fill](std::span<const double> x, std::span<double> out) {
        Tensor t(dim, 2);
        fill(x, t);
        for (int i = 0; i < dim; ++i)
          for (int j = i; j < dim; ++j) out[static_cast<std::size_t>(sym_index(i, j, dim))] = t(i, j);
      },
      scale));
}

JTensor SymTensorField::jets(std::span<const double> x, int order) const { return unpack(f_.evaluate(x, order), dim()); }

Tensor SymTensorField::values(std::span<const double> x) const {
  const auto v = f_.values(x);
  const int n = dim();
  Tensor t(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      t(i, j) = v[static_cast<std::size_t>(sym_index(i, j, n))];
      t(j, i) = t(i, j);
    }
  return t;
}

JTensor SymTensorField::apply(std::span<const Jet> x) const { return unpack(f_.apply(x), dim()); }

SymTensorField SymTensorField::as_finite_difference(double scale) const {
  return SymTensorField(f_.as_finite_difference(scale));
}

namespace {
SymTensorField combine(const SymTensorField& a, const SymTensorField& b, double sa, double sb) {
  const int n = a.dim();
  if (b.dim() != n) throw DomainError("adding tensor fields of different dimension");
  const int m = sym_size(n);
  if (a.field().composable() && b.field().composable()) {
    return SymTensorField(Field::analytic(n, m, [a, b, sa, sb, m](std::span<const Jet> x, std::span<Jet> out) {
      const auto fa = a.field().apply(x);
      const auto fb = b.field().apply(x);
      for (int i = 0; i < m; ++i) {
        out[static_cast<std::size_t>(i)] = sa * fa[static_cast<std::size_t>(i)] + sb * fb[static_cast<std::size_t>(i)];
      }
    }, kMaxJetOrder - std::min(a.max_order(), b.max_order())));
  }
  const bool fd = a.field().mode() == DerivativeMode::finite_difference ||
                  b.field().mode() == DerivativeMode::finite_difference;
  return SymTensorField(Field::pointwise(
      n, m,
      [a, b, sa, sb, m](std::span<const double> x, int order) {
        auto fa = a.field().evaluate(x, order);
        const auto fb = b.field().evaluate(x, order);
        for (int i = 0; i < m; ++i) {
          fa[static_cast<std::size_t>(i)] = sa * fa[static_cast<std::size_t>(i)] + sb * fb[static_cast<std::size_t>(i)];
        }
        return fa;
      },
      std::min(a.max_order(), b.max_order()), fd ? DerivativeMode::finite_difference : DerivativeMode::exact));
}
}  // namespace

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) { return combine(a, b, 1.0, 1.0); }

SymTensorField operator*(double s, const SymTensorField& a) { return combine(a, a, s, 0.0); }

SymTensorField scaled(const ScalarField& u, const SymTensorField& a) {
  const int n = a.dim();
  const int m = sym_size(n);
  if (u.field().composable() && a.field().composable()) {
    return SymTensorField(Field::analytic(n, m, [u, a, m](std::span<const Jet> x, std::span<Jet> out) {
      const Jet s = u.apply(x);
      const auto fa = a.field().apply(x);
      for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = s * fa[static_cast<std::size_t>(i)];
    }, kMaxJetOrder - std::min(u.field().max_order(), a.max_order())));
  }
  return SymTensorField(Field::pointwise(
      n, m,
      [u, a, m](std::span<const double> x, int order) {
        const Jet s = u.jet(x, order);
        auto fa = a.field().evaluate(x, order);
        for (int i = 0; i < m; ++i) fa[static_cast<std::size_t>(i)] = s * fa[static_cast<std::size_t>(i)];
        return fa;
      },
      std::min(u.field().max_order(), a.max_order())));
}

MetricField::MetricField(SymTensorField t, std::optional<double> einstein_constant, std::string name)
    : SymTensorField(std::move(t)), lambda_(einstein_constant), name_(std::move(name)) {}

JTensor MetricField::metric_jets(std::span<const double> x, int order) const {
  JTensor g = jets(x, order);
  if (!(min_eigenvalue(einlab::values(g)) > 0.0)) {
    throw DegenerateMetricError("metric is not positive definite at the evaluation point");
  }
  return g;
}

}  // namespace einlab
