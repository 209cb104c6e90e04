#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "scaleon/scaled_core.hpp"

using namespace scaleon;
using namespace scaleon::core;

namespace {

// Oracle for every structure operation: divide by ρ, apply the ordinary
// operation in the unit structure, multiply by ρ again.
Complex unscaled(const ScaledValue& v) { return v.raw / v.label.ratio(); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

StructureLabel random_label(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_mag(-3.0, 3.0);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  const Complex rho = std::polar(std::pow(10.0, log_mag(rng)), phase(rng));
  const Complex s = std::polar(std::pow(10.0, log_mag(rng) / 3.0), phase(rng));
  return StructureLabel(rho * s, s);
}

ScaledValue random_value(std::mt19937_64& rng, const StructureLabel& l) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {l.ratio() * Complex(d(rng), d(rng)), l};
}

}  // namespace

TEST_CASE("label rejects zero scale factors") {
  CHECK_THROWS_AS(StructureLabel(0.0, 1.0), Error);
  CHECK_THROWS_AS(StructureLabel(1.0, 0.0), Error);
  try {
    StructureLabel(Complex{}, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidScale);
  }
  CHECK(StructureLabel::unscaled(3.0).is_unscaled());
}

TEST_CASE("rescale follows the correspondence value rule") {
  const ScaledValue one{1.0, StructureLabel::unscaled(2.0)};
  CHECK(rescale(one, Complex(1.0)).raw == Complex(2.0));
  const ScaledValue x{Complex(0.3, -1.7), StructureLabel::unscaled(Complex(0.5, 2.0))};
  CHECK(rescale(x, x.label.level()).raw == x.raw);
  const ScaledValue z{0.0, StructureLabel::unscaled(Complex(7.0, -3.0))};
  CHECK(rescale(z, Complex(1e-3, 5.0)).raw == Complex(0.0));
  CHECK_THROWS_AS(rescale(one, Complex(0.0)), Error);
}

TEST_CASE("scaled_arith worked examples") {
  const StructureLabel l(2.0, 1.0);
  const ScaledValue u{4.0, l}, v{6.0, l};
  CHECK(scaled_arith(ArithKind::Mul, u, v).raw == Complex(12.0));
  CHECK(scaled_arith(ArithKind::Add, ScaledValue{1.0, l}, ScaledValue{2.0, l}).raw == Complex(3.0));
  CHECK(scaled_arith(ArithKind::Inv, identity(l)).raw == l.ratio());
  CHECK(scaled_arith(ArithKind::Conj, ScaledValue{Complex(3, 4), l}).raw == Complex(3, -4));
  CHECK_THROWS_AS(scaled_arith(ArithKind::Add, u), Error);
}

TEST_CASE("scaled_arith error cases") {
  const StructureLabel a(2.0, 1.0), b(3.0, 1.0);
  try {
    (void)add(ScaledValue{1.0, a}, ScaledValue{1.0, b});
    FAIL("expected LabelMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelMismatch);
  }
  try {
    (void)inverse(zero(a));
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}

TEST_CASE("operations agree with the unscale-operate-rescale oracle") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 200; ++i) {
    const StructureLabel l = random_label(rng);
    const Complex rho = l.ratio();
    const ScaledValue u = random_value(rng, l), v = random_value(rng, l);
    CHECK(rel(multiply(u, v).raw, rho * (unscaled(u) * unscaled(v))) < 1e-12 * std::max(1.0, std::abs(rho)));
    CHECK(rel(inverse(u).raw, rho / unscaled(u)) < 1e-12 * std::max(1.0, std::abs(rho)));
    CHECK(rel(conjugate(u).raw, rho * std::conj(unscaled(u))) < 1e-12 * std::max(1.0, std::abs(rho)));
  }
}

TEST_CASE("property: conjugation is an involution and zero is fixed") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const StructureLabel l = random_label(rng);
    const ScaledValue u = random_value(rng, l);
    CHECK(std::abs(conjugate(conjugate(u)).raw - u.raw) <= 1e-12 * std::abs(u.raw));
    CHECK(rescale(zero(l), random_label(rng).base()).raw == Complex(0.0));
    CHECK(group_act(l.ratio(), Complex(0.0)) == Complex(0.0));
  }
}

TEST_CASE("exact rationals satisfy the field axioms with no tolerance") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 40);
  const auto q = [&] { return Rational(num(rng), den(rng)); };
  for (int i = 0; i < 200; ++i) {
    Rational t = q(), s = q();
    if (t == 0) t = 1;
    if (s == 0) s = 3;
    const ExactLabel l(t, s);
    const ExactValue a{q(), l}, b{q(), l}, c{q(), l};
    CHECK(multiply(multiply(a, b), c).raw == multiply(a, multiply(b, c)).raw);
    CHECK(multiply(a, b).raw == multiply(b, a).raw);
    CHECK(multiply(a, add(b, c)).raw == add(multiply(a, b), multiply(a, c)).raw);
    CHECK(multiply(a, identity(l)).raw == a.raw);
    if (a.raw != 0) CHECK(multiply(a, inverse(a)).raw == identity(l).raw);
    CHECK(add(a, negate(a)).raw == 0);
  }
}

TEST_CASE("val_of_base and natural_val") {
  CHECK(val_of_base(BaseElement{6.0}, 2.0).raw == Complex(3.0));
  CHECK(val_of_base(BaseElement{Complex(1.5, -2.0)}, 1.0).raw == Complex(1.5, -2.0));
  // val at s=1 of an element whose value at t=3 is 1.
  const ScaledValue at3 = val_of_base(BaseElement{3.0}, 3.0);
  CHECK(at3.raw == Complex(1.0));
  CHECK(rescale(at3, Complex(1.0)).raw == Complex(3.0));
  CHECK_THROWS_AS(val_of_base(BaseElement{1.0}, 0.0), Error);

  CHECK(natural_val(2, 2) == 1);
  CHECK(natural_val(6, 6) == 1);
  CHECK(natural_val(0, 5) == 0);
  try {
    (void)natural_val(5, 2);
    FAIL("expected NotInBaseSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInBaseSet);
  }
}

TEST_CASE("eval_analytic examples") {
  const StructureLabel unit(1.0, 1.0), two(2.0, 1.0);
  CHECK(std::abs(eval_analytic(AnalyticSeries::exp(), zero(unit)).raw - 1.0) < 1e-15);
  const auto square = AnalyticSeries::polynomial({0.0, 0.0, 1.0});
  CHECK(eval_analytic(square, ScaledValue{6.0, two}).raw == Complex(18.0));

  std::mt19937_64 rng(5);
  const auto s = AnalyticSeries::sin(), c = AnalyticSeries::cos();
  for (int i = 0; i < 100; ++i) {
    const StructureLabel l = random_label(rng);
    const ScaledValue v = random_value(rng, l);
    const ScaledValue sv = eval_analytic(s, v), cv = eval_analytic(c, v);
    const Complex one = add(multiply(sv, sv), multiply(cv, cv)).raw;
    CHECK(rel(one / l.ratio(), 1.0) < 1e-12);
  }
}

TEST_CASE("eval_analytic reports NonConvergence outside the radius") {
  const StructureLabel unit(1.0, 1.0);
  try {
    (void)eval_analytic(AnalyticSeries::geometric(), ScaledValue{2.0, unit});
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
  const Complex g = eval_analytic(AnalyticSeries::geometric(), ScaledValue{0.5, unit}).raw;
  CHECK(std::abs(g - 2.0) < 1e-14);
}

TEST_CASE("series algebra matches pointwise arithmetic") {
  const auto e = AnalyticSeries::exp();
  const auto sum = e + AnalyticSeries::sin();
  const auto prod = e * AnalyticSeries::cos();
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    CHECK(std::abs(sum.evaluate(x) - (std::exp(x) + std::sin(x))) < 1e-13);
    CHECK(std::abs(prod.evaluate(x) - std::exp(x) * std::cos(x)) < 1e-12);
  }
}

TEST_CASE("vector operations") {
  const StructureLabel unit(1.0, 1.0);
  CHECK(std::abs(norm(ScaledVector{{3.0, 4.0}, unit}).raw - 5.0) < 1e-15);

  // ρ = i: norm-then-scale gives i, the reversed order would give 1.
  const StructureLabel li(Complex(0, 1), 1.0);
  const ScaledVector w{{Complex(0, 1), 0.0}, li};
  CHECK(std::abs(norm(w).raw - Complex(0, 1)) < 1e-15);
  double reversed = 0.0;
  for (const Complex& x : w.components) reversed += std::norm(x);
  CHECK(std::abs(std::sqrt(reversed) - norm(w).raw) > 0.5);

  const ScaledVector v{{Complex(1, 2), Complex(-3, 0.5)}, li};
  const ScaledVector same = scalar_mul(identity(li), v);
  for (std::size_t i = 0; i < v.components.size(); ++i) CHECK(std::abs(same.components[i] - v.components[i]) < 1e-15);
  CHECK_THROWS_AS(scalar_mul(identity(unit), v), Error);
  CHECK_THROWS_AS(add(v, ScaledVector{{1.0, 1.0}, unit}), Error);
}

TEST_CASE("group action") {
  CHECK(group_act(Complex(1.0), Complex(2.0, 3.0)) == Complex(2.0, 3.0));
  CHECK(group_act(Complex(2.0), Complex(3.0)) == Complex(6.0));
  CHECK(group_act(Complex(0.5), Complex(6.0)) == Complex(3.0));
  const Complex d(1.5, -0.2), e(-0.7, 2.0), c(0.3, 0.9);
  CHECK(std::abs(group_act(d, group_act(e, c)) - group_act(d * e, c)) < 1e-15);
  CHECK_THROWS_AS(group_act(Complex(0.0), Complex(1.0)), Error);
  CHECK_THROWS_AS(group_act(-1.0, 1.0), Error);
  CHECK(group_act(2.0, 3.0) == 6.0);
}
