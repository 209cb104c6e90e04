#include "scaleon/gauge.hpp"

#include <cmath>

#include "scaleon/error.hpp"

namespace scaleon {

namespace {

constexpr Complex I{0.0, 1.0};

const GridField* grid_backing(const MatterField& psi) {
  return dynamic_cast<const GridField*>(psi.component(0).re().get());
}

const AnalyticField* as_analytic(const RealFieldPtr& f) { return dynamic_cast<const AnalyticField*>(f.get()); }

Point shifted(Point x, int mu, double h) {
  x[static_cast<std::size_t>(mu)] += h;
  return x;
}

void require_axis(int mu) {
  if (mu < 0 || mu > 3) fail(ErrorCode::InvalidArgument, "axis out of range");
}

double link_step(const MatterField& psi, int mu, double step) {
  if (step > 0.0) return step;
  if (step < 0.0) fail(ErrorCode::StepTooSmall, "derivative step must be positive");
  const GridField* g = grid_backing(psi);
  if (!g) fail(ErrorCode::InvalidArgument, "link derivative of an analytic field needs an explicit step");
  if (mu >= g->grid().dim()) fail(ErrorCode::OutOfDomain, "axis is not a grid axis");
  return g->grid().spacing(mu);
}

Multiplet sample_at(const MatterField& psi, const Point& x) {
  if (!psi.contains(x)) fail(ErrorCode::OutOfDomain, "derivative stencil leaves the domain");
  return psi.value(x);
}

}  // namespace

void CouplingSet::validate() const {
  for (double v : {a_a, a_b, a_p, a_t, m, mu, quartic}) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "couplings must be finite");
  }
}

GaugeBackground GaugeBackground::from_scaling(const ScalingField& scaling, CovectorField P) {
  return {scaling.A(), scaling.B(), std::move(P), {}};
}

bool GaugeBackground::contains(const Point& x) const {
  return A.contains(x) && B.contains(x) && P.contains(x) && w[0].contains(x) && w[1].contains(x) &&
         w[2].contains(x);
}

std::size_t component_count(FieldKind kind) noexcept {
  switch (kind) {
    case FieldKind::scalar: return 1;
    case FieldKind::doublet: return 2;
    case FieldKind::spinor: return 4;
  }
  return 0;
}

const char* to_string(FieldKind kind) noexcept {
  switch (kind) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::doublet: return "doublet";
    case FieldKind::spinor: return "spinor";
  }
  return "?";
}

MatterField::MatterField(FieldKind kind, std::vector<ComplexField> components)
    : kind_(kind), components_(std::move(components)) {
  if (components_.size() != component_count(kind_)) {
    fail(ErrorCode::KindMismatch, std::string(to_string(kind_)) + " field needs " +
                                      std::to_string(component_count(kind_)) + " components");
  }
}

MatterField MatterField::scalar(ComplexField psi) { return {FieldKind::scalar, {std::move(psi)}}; }

MatterField MatterField::doublet(ComplexField up, ComplexField down) {
  return {FieldKind::doublet, {std::move(up), std::move(down)}};
}

MatterField MatterField::spinor(std::array<ComplexField, 4> c) {
  return {FieldKind::spinor, {c[0], c[1], c[2], c[3]}};
}

Multiplet MatterField::value(const Point& x) const {
  Multiplet v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = components_[i].value(x);
  return v;
}

Multiplet MatterField::derivative(const Point& x, int mu) const {
  Multiplet v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = components_[i].derivative(x, mu);
  return v;
}

Multiplet MatterField::second_derivative(const Point& x, int a, int b) const {
  Multiplet v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = components_[i].second_derivative(x, a, b);
  return v;
}

bool MatterField::contains(const Point& x) const {
  for (const auto& c : components_) {
    if (!c.contains(x)) return false;
  }
  return true;
}

bool MatterField::is_analytic() const {
  for (const auto& c : components_) {
    if (!c.is_analytic()) return false;
  }
  return true;
}

MatterField MatterField::sampled_on(const FlatGrid& grid, Execution exec) const {
  std::vector<ComplexField> out;
  out.reserve(size());
  for (const auto& c : components_) out.push_back(c.sampled_on(grid, exec));
  return {kind_, std::move(out)};
}

void MatterField::require(FieldKind expected) const {
  if (kind_ != expected) {
    fail(ErrorCode::KindMismatch,
         std::string("expected a ") + to_string(expected) + " field, got a " + to_string(kind_) + " field");
  }
}

Complex abelian_connection(const GaugeBackground& bg, const CouplingSet& c, const Point& x, int mu) {
  require_axis(mu);
  if (!bg.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the gauge background");
  const auto m = static_cast<std::size_t>(mu);
  return c.a_a * bg.A.value(x)[m] + I * (c.a_b * bg.B.value(x)[m] + c.a_p * bg.P.value(x)[m]);
}

Complex wilson_link(const GaugeBackground& bg, const CouplingSet& c, const Point& x, int mu, double dx) {
  const Complex conn = abelian_connection(bg, c, x, mu);
  if (!bg.contains(shifted(x, mu, dx))) fail(ErrorCode::OutOfDomain, "link endpoint outside the domain");
  return std::exp(conn * dx);
}

Multiplet covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                               const Point& x, int mu, DerivativeOptions options) {
  require_axis(mu);
  if (!psi.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the matter field domain");
  const std::size_t n = psi.size();
  Multiplet out(n);
  switch (options.mode) {
    case DerivativeMode::continuum: {
      const Complex conn = abelian_connection(bg, c, x, mu);
      const Multiplet v = psi.value(x);
      Multiplet d;
      if (options.step > 0.0) {
        const double h = options.step;
        const Multiplet fp = sample_at(psi, shifted(x, mu, h));
        const Multiplet fm = sample_at(psi, shifted(x, mu, -h));
        d.resize(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
      } else if (options.step < 0.0) {
        fail(ErrorCode::StepTooSmall, "derivative step must be positive");
      } else {
        d = psi.derivative(x, mu);
      }
      for (std::size_t i = 0; i < n; ++i) out[i] = d[i] + conn * v[i];
      return out;
    }
    case DerivativeMode::link: {
      const double h = link_step(psi, mu, options.step);
      const Complex y = wilson_link(bg, c, x, mu, h);
      const Multiplet fp = sample_at(psi, shifted(x, mu, h));
      const Multiplet v = psi.value(x);
      for (std::size_t i = 0; i < n; ++i) out[i] = (y * fp[i] - v[i]) / h;
      return out;
    }
    case DerivativeMode::symmetric_link: {
      const double h = link_step(psi, mu, options.step);
      const Complex yp = wilson_link(bg, c, x, mu, h);
      const Complex ym = wilson_link(bg, c, x, mu, -h);
      const Multiplet fp = sample_at(psi, shifted(x, mu, h));
      const Multiplet fm = sample_at(psi, shifted(x, mu, -h));
      for (std::size_t i = 0; i < n; ++i) out[i] = (yp * fp[i] - ym * fm[i]) / (2.0 * h);
      return out;
    }
  }
  return out;
}

Complex scalar_covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                    const Point& x, int mu, DerivativeOptions options) {
  psi.require(FieldKind::scalar);
  return covariant_derivative(psi, bg, c, x, mu, options)[0];
}

Multiplet nonabelian_covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                          const Point& x, int mu, DerivativeOptions options) {
  psi.require(FieldKind::doublet);
  Multiplet out = covariant_derivative(psi, bg, c, x, mu, options);
  const auto m = static_cast<std::size_t>(mu);
  const double w1 = bg.w[0].value(x)[m];
  const double w2 = bg.w[1].value(x)[m];
  const double w3 = bg.w[2].value(x)[m];
  const Multiplet v = psi.value(x);
  // Σ w^a σ^a = [[w3, w1 − i w2], [w1 + i w2, −w3]].
  const Complex up = w3 * v[0] + Complex(w1, -w2) * v[1];
  const Complex down = Complex(w1, w2) * v[0] - w3 * v[1];
  out[0] += I * c.a_t * up;
  out[1] += I * c.a_t * down;
  return out;
}

Complex structure_derivative(const ScalingField& field, const Point& x, int mu, Complex level) {
  require_axis(mu);
  const FiberLevel here = level_at(field, x, level);
  const GradientFields grad = grad_fields(field, x);
  const auto m = static_cast<std::size_t>(mu);
  // ∂(c·g) = c·g·(A + iB); the quotient by c·g is the level ratio here/here.
  return Complex(grad.A[m], grad.B[m]) * ratio(here, here);
}

GaugeTransformed gauge_transform(const MatterField& psi, const GaugeBackground& bg, const RealFieldPtr& a_fn,
                                 const RealFieldPtr& b_fn, const CouplingSet& c) {
  if (!a_fn || !b_fn) fail(ErrorCode::InvalidArgument, "gauge functions must be set");
  if (c.a_b == 0.0 || c.a_p == 0.0) {
    fail(ErrorCode::DivisionByZero, "gauge transform needs nonzero a_b and a_p");
  }
  std::vector<ComplexField> rotated;
  rotated.reserve(psi.size());
  const AnalyticField* a_expr = as_analytic(a_fn);
  const AnalyticField* b_expr = as_analytic(b_fn);
  if (const GridField* g = grid_backing(psi)) {
    const FlatGrid& grid = g->grid();
    for (const auto& comp : psi.components()) {
      std::vector<double> re(grid.size()), im(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        const Complex v = std::exp(-I * (a_fn->value(x) + b_fn->value(x))) * comp.value(x);
        re[i] = v.real();
        im[i] = v.imag();
      }
      rotated.emplace_back(std::make_shared<GridField>(grid, std::move(re)),
                           std::make_shared<GridField>(grid, std::move(im)));
    }
  } else if (a_expr && b_expr) {
    const Expr theta = a_expr->expr() + b_expr->expr();
    const Expr cs = Expr::apply(Expr::Op::Cos, theta);
    const Expr sn = Expr::apply(Expr::Op::Sin, theta);
    for (const auto& comp : psi.components()) {
      const AnalyticField* re = as_analytic(comp.re());
      const AnalyticField* im = as_analytic(comp.im());
      if (!re || !im) fail(ErrorCode::InvalidArgument, "mixed analytic and sampled matter components");
      // e^{−iθ}(u + iv) = (u cosθ + v sinθ) + i(v cosθ − u sinθ).
      rotated.emplace_back(AnalyticField::make(re->expr() * cs + im->expr() * sn),
                           AnalyticField::make(im->expr() * cs - re->expr() * sn));
    }
  } else {
    fail(ErrorCode::InvalidArgument, "gauge functions must be analytic for an analytic matter field");
  }

  const CovectorField da = CovectorField::gradient_of(*a_fn);
  const CovectorField db = CovectorField::gradient_of(*b_fn);
  GaugeBackground out = bg;
  out.B = CovectorField::combine({{1.0, bg.B}, {1.0 / c.a_b, da}});
  out.P = CovectorField::combine({{1.0, bg.P}, {1.0 / c.a_p, db}});
  return {MatterField(psi.kind(), std::move(rotated)), std::move(out)};
}

}  // namespace scaleon
