#include "scaleon/real_field.hpp"

#include <cmath>

#include "scaleon/error.hpp"
#include "scaleon/kernels.hpp"

namespace scaleon {

namespace {

std::span<const double> vars(const Point& x) { return {x.data(), x.size()}; }

struct Tap {
  std::ptrdiff_t offset;
  double weight;
};

// Stencil for d/dx at index i of a line of n samples with step h.
std::vector<Tap> first_derivative_taps(std::size_t n, std::size_t i, double h) {
  if (n < 2) return {};
  if (n == 2) return {{0, -1.0 / h}, {1, 1.0 / h}};
  if (i == 0) return {{0, -1.5 / h}, {1, 2.0 / h}, {2, -0.5 / h}};
  if (i == n - 1) return {{0, 1.5 / h}, {-1, -2.0 / h}, {-2, 0.5 / h}};
  return {{-1, -0.5 / h}, {1, 0.5 / h}};
}

std::vector<Tap> second_derivative_taps(std::size_t n, std::size_t i, double h) {
  const double h2 = h * h;
  if (n < 3) return {};
  if (n >= 4 && i == 0) return {{0, 2.0 / h2}, {1, -5.0 / h2}, {2, 4.0 / h2}, {3, -1.0 / h2}};
  if (n >= 4 && i == n - 1) return {{0, 2.0 / h2}, {-1, -5.0 / h2}, {-2, 4.0 / h2}, {-3, -1.0 / h2}};
  const std::ptrdiff_t c = i == 0 ? 1 : (i == n - 1 ? -1 : 0);
  return {{c - 1, 1.0 / h2}, {c, -2.0 / h2}, {c + 1, 1.0 / h2}};
}

Site shifted(Site s, int axis, std::ptrdiff_t offset) {
  auto& c = s[static_cast<std::size_t>(axis)];
  c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + offset);
  return s;
}

}  // namespace

AnalyticField::AnalyticField(Expr expr) : expr_(std::move(expr)) {
  if (expr_.arity() > 4) fail(ErrorCode::InvalidArgument, "field expressions may use x0..x3 only");
  for (std::size_t a = 0; a < 4; ++a) first_[a] = expr_.derivative(a);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a; b < 4; ++b) {
      second_[a][b] = first_[a].derivative(b);
      second_[b][a] = second_[a][b];
    }
  }
}

RealFieldPtr AnalyticField::make(Expr expr) { return std::make_shared<AnalyticField>(std::move(expr)); }

RealFieldPtr AnalyticField::parse(std::string_view text) { return make(parse_field_expression(text)); }

RealFieldPtr AnalyticField::constant(double c) { return make(Expr::constant(c)); }

double AnalyticField::value(const Point& x) const { return expr_.evaluate(vars(x)); }

double AnalyticField::derivative(const Point& x, int axis) const {
  return first_[static_cast<std::size_t>(axis)].evaluate(vars(x));
}

double AnalyticField::second_derivative(const Point& x, int a, int b) const {
  return second_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].evaluate(vars(x));
}

RealFieldPtr AnalyticField::derivative_field(int axis) const {
  return make(first_[static_cast<std::size_t>(axis)]);
}

GridField::GridField(FlatGrid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    fail(ErrorCode::InvalidArgument, "sample count does not match the grid");
  }
}

std::shared_ptr<const GridField> GridField::sample(const FlatGrid& grid, const RealField& field,
                                                   Execution exec) {
  const kernels::RealSiteFunction f = [&field](const Point& x) { return field.value(x); };
  auto samples = kernels::sample(grid, f, exec);
  return std::make_shared<GridField>(grid, std::move(samples));
}

Site GridField::require_site(const Point& x) const {
  auto s = grid_.site_at(x);
  if (!s) fail(ErrorCode::OutOfDomain, "point is not a site of the sampling grid");
  return *s;
}

double GridField::value(const Point& x) const { return at(require_site(x)); }

double GridField::derivative(const Point& x, int axis) const {
  return derivative_at(require_site(x), axis);
}

double GridField::second_derivative(const Point& x, int a, int b) const {
  return second_derivative_at(require_site(x), a, b);
}

double GridField::derivative_at(const Site& s, int axis) const {
  if (axis >= grid_.dim()) return 0.0;
  double d = 0.0;
  for (const Tap& t : first_derivative_taps(grid_.extent(axis), s[static_cast<std::size_t>(axis)],
                                            grid_.spacing(axis))) {
    d += t.weight * at(shifted(s, axis, t.offset));
  }
  return d;
}

double GridField::second_derivative_at(const Site& s, int a, int b) const {
  if (a >= grid_.dim() || b >= grid_.dim()) return 0.0;
  double d = 0.0;
  if (a == b) {
    for (const Tap& t : second_derivative_taps(grid_.extent(a), s[static_cast<std::size_t>(a)],
                                               grid_.spacing(a))) {
      d += t.weight * at(shifted(s, a, t.offset));
    }
    return d;
  }
  for (const Tap& ta : first_derivative_taps(grid_.extent(a), s[static_cast<std::size_t>(a)],
                                             grid_.spacing(a))) {
    const Site sa = shifted(s, a, ta.offset);
    for (const Tap& tb : first_derivative_taps(grid_.extent(b), s[static_cast<std::size_t>(b)],
                                               grid_.spacing(b))) {
      d += ta.weight * tb.weight * at(shifted(sa, b, tb.offset));
    }
  }
  return d;
}

RealFieldPtr GridField::derivative_field(int axis) const {
  std::vector<double> d(samples_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = derivative_at(grid_.site(i), axis);
  return std::make_shared<GridField>(grid_, std::move(d));
}

LinearCombinationField::LinearCombinationField(double offset, std::vector<Term> terms)
    : offset_(offset), terms_(std::move(terms)) {}

double LinearCombinationField::value(const Point& x) const {
  double v = offset_;
  for (const auto& [w, f] : terms_) v += w * f->value(x);
  return v;
}

double LinearCombinationField::derivative(const Point& x, int axis) const {
  double v = 0.0;
  for (const auto& [w, f] : terms_) v += w * f->derivative(x, axis);
  return v;
}

double LinearCombinationField::second_derivative(const Point& x, int a, int b) const {
  double v = 0.0;
  for (const auto& [w, f] : terms_) v += w * f->second_derivative(x, a, b);
  return v;
}

RealFieldPtr LinearCombinationField::derivative_field(int axis) const {
  std::vector<Term> d;
  d.reserve(terms_.size());
  for (const auto& [w, f] : terms_) d.emplace_back(w, f->derivative_field(axis));
  return std::make_shared<LinearCombinationField>(0.0, std::move(d));
}

bool LinearCombinationField::contains(const Point& x) const {
  for (const auto& t : terms_) {
    if (!t.second->contains(x)) return false;
  }
  return true;
}

bool LinearCombinationField::is_analytic() const {
  for (const auto& t : terms_) {
    if (!t.second->is_analytic()) return false;
  }
  return true;
}

ComplexField::ComplexField() : ComplexField(AnalyticField::constant(0.0), AnalyticField::constant(0.0)) {}

ComplexField::ComplexField(RealFieldPtr re, RealFieldPtr im) : re_(std::move(re)), im_(std::move(im)) {
  if (!re_ || !im_) fail(ErrorCode::InvalidArgument, "complex field components must be set");
}

ComplexField ComplexField::constant(Complex c) {
  return {AnalyticField::constant(c.real()), AnalyticField::constant(c.imag())};
}

ComplexField ComplexField::parse(std::string_view re, std::string_view im) {
  return {AnalyticField::parse(re), AnalyticField::parse(im)};
}

Complex ComplexField::value(const Point& x) const { return {re_->value(x), im_->value(x)}; }

Complex ComplexField::derivative(const Point& x, int axis) const {
  return {re_->derivative(x, axis), im_->derivative(x, axis)};
}

Complex ComplexField::second_derivative(const Point& x, int a, int b) const {
  return {re_->second_derivative(x, a, b), im_->second_derivative(x, a, b)};
}

bool ComplexField::contains(const Point& x) const { return re_->contains(x) && im_->contains(x); }

bool ComplexField::is_analytic() const { return re_->is_analytic() && im_->is_analytic(); }

ComplexField ComplexField::sampled_on(const FlatGrid& grid, Execution exec) const {
  return {GridField::sample(grid, *re_, exec), GridField::sample(grid, *im_, exec)};
}

CovectorField::CovectorField() : CovectorField(zero()) {}

CovectorField::CovectorField(std::array<RealFieldPtr, 4> components) : components_(std::move(components)) {
  for (auto& c : components_) {
    if (!c) c = AnalyticField::constant(0.0);
  }
}

CovectorField CovectorField::zero() {
  const RealFieldPtr z = AnalyticField::constant(0.0);
  return CovectorField({z, z, z, z});
}

CovectorField CovectorField::gradient_of(const RealField& f) {
  return CovectorField({f.derivative_field(0), f.derivative_field(1), f.derivative_field(2),
                        f.derivative_field(3)});
}

CovectorField CovectorField::parse(const std::array<std::string_view, 4>& components) {
  std::array<RealFieldPtr, 4> c;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    c[mu] = AnalyticField::parse(components[mu].empty() ? std::string_view("0") : components[mu]);
  }
  return CovectorField(std::move(c));
}

Covector CovectorField::value(const Point& x) const {
  Covector v{};
  for (std::size_t mu = 0; mu < 4; ++mu) v[mu] = components_[mu]->value(x);
  return v;
}

double CovectorField::derivative(const Point& x, int mu, int nu) const {
  return components_[static_cast<std::size_t>(mu)]->derivative(x, nu);
}

double CovectorField::divergence(const Point& x, const Metric& metric) const {
  double d = 0.0;
  for (int mu = 0; mu < metric.dim(); ++mu) d += metric(mu) * derivative(x, mu, mu);
  return d;
}

bool CovectorField::contains(const Point& x) const {
  for (const auto& c : components_) {
    if (!c->contains(x)) return false;
  }
  return true;
}

CovectorField CovectorField::combine(const std::vector<std::pair<double, CovectorField>>& terms) {
  std::array<RealFieldPtr, 4> c;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    std::vector<LinearCombinationField::Term> t;
    for (const auto& [w, field] : terms) t.emplace_back(w, field.components_[mu]);
    c[mu] = std::make_shared<LinearCombinationField>(0.0, std::move(t));
  }
  return CovectorField(std::move(c));
}

}  // namespace scaleon
