#include "scaleon/scaled_core.hpp"

#include <cmath>
#include <memory>

namespace scaleon::core {

ScaledValue val_of_base(const BaseElement& a, Complex s) {
  if (s == Complex{}) fail(ErrorCode::InvalidScale, "value map at level 0");
  return {a.canonical / s, StructureLabel::unscaled(s)};
}

std::uint64_t natural_val(std::uint64_t a, std::uint64_t n) {
  if (n == 0) fail(ErrorCode::InvalidScale, "natural number structure with scale 0");
  if (a % n != 0) {
    fail(ErrorCode::NotInBaseSet,
         std::to_string(a) + " is not a multiple of " + std::to_string(n));
  }
  return a / n;
}

namespace {

double inverse_factorial(std::size_t n) {
  // 1/Γ(n+1) underflows to 0 past n = 170, which is the right limit.
  return n > 170 ? 0.0 : 1.0 / std::tgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

AnalyticSeries::AnalyticSeries(std::string name, Generator coefficients,
                               std::optional<std::size_t> degree)
    : name_(std::move(name)), coefficients_(std::move(coefficients)), degree_(degree) {}

AnalyticSeries AnalyticSeries::exp() {
  return {"exp", [](std::size_t n) { return Complex{inverse_factorial(n)}; }};
}

AnalyticSeries AnalyticSeries::sin() {
  return {"sin", [](std::size_t n) {
            if (n % 2 == 0) return Complex{};
            const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            return Complex{sign * inverse_factorial(n)};
          }};
}

AnalyticSeries AnalyticSeries::cos() {
  return {"cos", [](std::size_t n) {
            if (n % 2 == 1) return Complex{};
            const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
            return Complex{sign * inverse_factorial(n)};
          }};
}

AnalyticSeries AnalyticSeries::polynomial(std::vector<Complex> coefficients) {
  const std::size_t degree = coefficients.empty() ? 0 : coefficients.size() - 1;
  auto shared = std::make_shared<const std::vector<Complex>>(std::move(coefficients));
  return {"polynomial",
          [shared](std::size_t n) { return n < shared->size() ? (*shared)[n] : Complex{}; },
          degree};
}

AnalyticSeries AnalyticSeries::geometric() {
  return {"geometric", [](std::size_t) { return Complex{1.0}; }};
}

AnalyticSeries AnalyticSeries::operator+(const AnalyticSeries& other) const {
  std::optional<std::size_t> degree;
  if (degree_ && other.degree_) degree = std::max(*degree_, *other.degree_);
  auto a = coefficients_;
  auto b = other.coefficients_;
  return {name_ + "+" + other.name_, [a, b](std::size_t n) { return a(n) + b(n); }, degree};
}

AnalyticSeries AnalyticSeries::operator*(const AnalyticSeries& other) const {
  std::optional<std::size_t> degree;
  if (degree_ && other.degree_) degree = *degree_ + *other.degree_;
  auto a = coefficients_;
  auto b = other.coefficients_;
  return {"(" + name_ + ")*(" + other.name_ + ")",
          [a, b](std::size_t n) {
            Complex sum{};
            for (std::size_t k = 0; k <= n; ++k) sum += a(k) * b(n - k);
            return sum;
          },
          degree};
}

Complex AnalyticSeries::evaluate(Complex x, double tolerance, std::size_t max_terms) const {
  const std::size_t limit = degree_ ? std::min(*degree_ + 1, max_terms) : max_terms;
  Complex sum{};
  Complex power{1.0};
  // Convergence is declared once a run of consecutive terms is negligible;
  // a run is needed because sin/cos have every other coefficient zero.
  constexpr std::size_t kQuietRun = 4;
  std::size_t quiet = 0;
  for (std::size_t n = 0; n < limit; ++n) {
    const Complex term = coefficient(n) * power;
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) break;
    if (degree_) {
      power *= x;
      continue;
    }
    if (std::abs(term) <= tolerance * std::abs(sum) || term == Complex{}) {
      if (++quiet >= kQuietRun) return sum;
    } else {
      quiet = 0;
    }
    power *= x;
    if (x == Complex{} && n >= 1) return sum;
  }
  if (degree_ && *degree_ + 1 <= max_terms) return sum;
  fail(ErrorCode::NonConvergence,
       "series '" + name_ + "' did not converge within " + std::to_string(max_terms) + " terms");
}

ScaledValue eval_analytic(const AnalyticSeries& f, const ScaledValue& v, SeriesOptions options) {
  const Complex rho = v.label.ratio();
  const Complex unit_value = f.evaluate(v.raw / rho, options.tolerance, options.max_terms);
  return {rho * unit_value, v.label};
}

ScaledVector scalar_mul(const ScaledValue& a, const ScaledVector& w) {
  if (!(a.label == w.label)) fail(ErrorCode::LabelMismatch, "scalar and vector in different structures");
  const Complex rho = w.label.ratio();
  ScaledVector out{{}, w.label};
  out.components.reserve(w.components.size());
  for (const Complex& c : w.components) out.components.push_back(a.raw * c / rho);
  return out;
}

ScaledVector add(const ScaledVector& u, const ScaledVector& w) {
  if (!(u.label == w.label)) fail(ErrorCode::LabelMismatch, "vectors in different structures");
  if (u.components.size() != w.components.size()) {
    fail(ErrorCode::InvalidArgument, "vector dimensions differ");
  }
  ScaledVector out{{}, u.label};
  out.components.reserve(u.components.size());
  for (std::size_t i = 0; i < u.components.size(); ++i) {
    out.components.push_back(u.components[i] + w.components[i]);
  }
  return out;
}

ScaledValue norm(const ScaledVector& w) {
  const Complex rho = w.label.ratio();
  double sq = 0.0;
  for (const Complex& c : w.components) sq += std::norm(c / rho);
  return {rho * std::sqrt(sq), w.label};
}

Complex group_act(Complex d, Complex level) {
  if (d == Complex{}) fail(ErrorCode::InvalidScale, "group element 0 annihilates the structure");
  return d * level;
}

double group_act(double d, double level) {
  if (!(d > 0.0)) fail(ErrorCode::InvalidScale, "tangent-bundle group elements must be positive");
  return d * level;
}

}  // namespace scaleon::core
