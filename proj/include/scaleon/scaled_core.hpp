#pragma once

// Scaled number structures.
//
// A structure label (t, s) names the level-t number structure written with
// the operations of the level-s structure. Inside such a structure a number
// whose value is a in the level-t structure is written raw = (t/s)·a, and the
// operations are rescaled so that every field axiom still holds:
//
//   add:  u + v
//   mul:  u·v / ρ          (ρ = t/s is the multiplicative identity)
//   inv:  ρ² / u
//   conj: ρ·conj(u/ρ)
//
// Only ρ enters the arithmetic; t and s are kept for auditability.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "scaleon/error.hpp"

namespace scaleon::core {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static Complex conj(const Complex& z) { return std::conj(z); }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
};

template <>
struct ScalarTraits<Rational> {
  static Rational conj(const Rational& q) { return q; }
  static bool is_zero(const Rational& q) { return q == 0; }
};

template <class S>
class BasicLabel {
 public:
  BasicLabel(S level_t, S base_s) : t_(std::move(level_t)), s_(std::move(base_s)) {
    if (ScalarTraits<S>::is_zero(t_) || ScalarTraits<S>::is_zero(s_)) {
      fail(ErrorCode::InvalidScale, "scaling factors of a structure label must be nonzero");
    }
  }

  static BasicLabel unscaled(S level) { return BasicLabel(level, level); }

  const S& level() const noexcept { return t_; }
  const S& base() const noexcept { return s_; }
  S ratio() const { return t_ / s_; }
  bool is_unscaled() const { return t_ == s_; }

  friend bool operator==(const BasicLabel& a, const BasicLabel& b) {
    return a.t_ == b.t_ && a.s_ == b.s_;
  }

 private:
  S t_;
  S s_;
};

template <class S>
struct BasicScaledValue {
  S raw{};
  BasicLabel<S> label;

  BasicScaledValue(S raw_value, BasicLabel<S> l) : raw(std::move(raw_value)), label(std::move(l)) {}
};

using StructureLabel = BasicLabel<Complex>;
using ScaledValue = BasicScaledValue<Complex>;
using ExactLabel = BasicLabel<Rational>;
using ExactValue = BasicScaledValue<Rational>;

namespace detail {

template <class S>
void require_same_label(const BasicScaledValue<S>& u, const BasicScaledValue<S>& v) {
  if (!(u.label == v.label)) fail(ErrorCode::LabelMismatch, "operands belong to different structures");
}

}  // namespace detail

/// Additive identity of the structure.
template <class S>
BasicScaledValue<S> zero(const BasicLabel<S>& label) {
  return {S{0}, label};
}

/// Multiplicative identity of the structure: raw value t/s.
template <class S>
BasicScaledValue<S> identity(const BasicLabel<S>& label) {
  return {label.ratio(), label};
}

/// Moves a value to the structure with the same level but base `new_base`.
/// For an unscaled input (t = s) this is the correspondence Z_{s,t}: raw
/// value a becomes (t/new_base)·a.
template <class S>
BasicScaledValue<S> rescale(const BasicScaledValue<S>& v, const S& new_base) {
  if (ScalarTraits<S>::is_zero(new_base)) fail(ErrorCode::InvalidScale, "rescale to a zero base");
  if (v.label.base() == new_base) return v;
  BasicLabel<S> target(v.label.level(), new_base);
  return {v.raw * (v.label.base() / new_base), target};
}

template <class S>
BasicScaledValue<S> add(const BasicScaledValue<S>& u, const BasicScaledValue<S>& v) {
  detail::require_same_label(u, v);
  return {u.raw + v.raw, u.label};
}

template <class S>
BasicScaledValue<S> negate(const BasicScaledValue<S>& u) {
  return {-u.raw, u.label};
}

template <class S>
BasicScaledValue<S> subtract(const BasicScaledValue<S>& u, const BasicScaledValue<S>& v) {
  detail::require_same_label(u, v);
  return {u.raw - v.raw, u.label};
}

template <class S>
BasicScaledValue<S> multiply(const BasicScaledValue<S>& u, const BasicScaledValue<S>& v) {
  detail::require_same_label(u, v);
  return {u.raw * v.raw / u.label.ratio(), u.label};
}

template <class S>
BasicScaledValue<S> inverse(const BasicScaledValue<S>& u) {
  if (ScalarTraits<S>::is_zero(u.raw)) fail(ErrorCode::DivisionByZero, "inverse of the zero element");
  const S rho = u.label.ratio();
  return {rho * rho / u.raw, u.label};
}

template <class S>
BasicScaledValue<S> conjugate(const BasicScaledValue<S>& u) {
  const S rho = u.label.ratio();
  return {rho * ScalarTraits<S>::conj(u.raw / rho), u.label};
}

enum class ArithKind { Add, Mul, Inv, Conj };

/// Dispatching form of the four structure operations; binary kinds require `v`.
template <class S>
BasicScaledValue<S> scaled_arith(ArithKind kind, const BasicScaledValue<S>& u,
                                 const std::optional<std::type_identity_t<BasicScaledValue<S>>>& v = std::nullopt) {
  switch (kind) {
    case ArithKind::Add:
    case ArithKind::Mul:
      if (!v) fail(ErrorCode::InvalidArgument, "binary structure operation needs two operands");
      return kind == ArithKind::Add ? add(u, *v) : multiply(u, *v);
    case ArithKind::Inv: return inverse(u);
    case ArithKind::Conj: return conjugate(u);
  }
  fail(ErrorCode::InvalidArgument, "unknown arithmetic kind");
}

/// A base-set element, identified with its value in the unit structure.
struct BaseElement {
  Complex canonical;
};

/// Value of a base-set element inside the unscaled structure at level s.
ScaledValue val_of_base(const BaseElement& a, Complex s);

/// Value of natural number `a` inside the structure whose base set holds
/// the multiples of n.
std::uint64_t natural_val(std::uint64_t a, std::uint64_t n);

/// Power series of an analytic function in the unit structure. Coefficients
/// are produced on demand so infinite series (exp, sin, cos) need no cutoff
/// until evaluation.
class AnalyticSeries {
 public:
  using Generator = std::function<Complex(std::size_t)>;

  AnalyticSeries(std::string name, Generator coefficients,
                 std::optional<std::size_t> degree = std::nullopt);

  static AnalyticSeries exp();
  static AnalyticSeries sin();
  static AnalyticSeries cos();
  static AnalyticSeries polynomial(std::vector<Complex> coefficients);
  /// Σ xⁿ; converges only for |x| < 1.
  static AnalyticSeries geometric();

  AnalyticSeries operator+(const AnalyticSeries& other) const;
  /// Cauchy product.
  AnalyticSeries operator*(const AnalyticSeries& other) const;

  Complex coefficient(std::size_t n) const { return coefficients_(n); }
  const std::optional<std::size_t>& degree() const noexcept { return degree_; }
  const std::string& name() const noexcept { return name_; }

  /// Plain evaluation in the unit structure.
  Complex evaluate(Complex x, double tolerance = 1e-17, std::size_t max_terms = 2000) const;

 private:
  std::string name_;
  Generator coefficients_;
  std::optional<std::size_t> degree_;
};

struct SeriesOptions {
  double tolerance = 1e-17;
  std::size_t max_terms = 2000;
};

/// Value of the corresponding analytic function in the structure of `v`:
/// ρ·f(v.raw/ρ).
ScaledValue eval_analytic(const AnalyticSeries& f, const ScaledValue& v, SeriesOptions options = {});

struct ScaledVector {
  std::vector<Complex> components;
  StructureLabel label;
};

ScaledVector scalar_mul(const ScaledValue& a, const ScaledVector& w);
ScaledVector add(const ScaledVector& u, const ScaledVector& w);
/// Norm-then-scale: ρ·|w/ρ|.
ScaledValue norm(const ScaledVector& w);

/// Action of the structure group element d on a fiber level.
Complex group_act(Complex d, Complex level);
/// Real tangent-bundle group: d must be positive.
double group_act(double d, double level);

}  // namespace scaleon::core
