// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance used below is pinned in `tol`.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scaleon/csv.hpp"
#include "scaleon/dynamics.hpp"
#include "scaleon/gauge.hpp"
#include "scaleon/geometry.hpp"
#include "scaleon/higgs.hpp"
#include "scaleon/random_fields.hpp"
#include "scaleon/scaled_core.hpp"
#include "scaleon/scaling_field.hpp"

using namespace scaleon;
namespace fs = std::filesystem;

namespace tol {
constexpr double ac1_float_rel = 1e-12;
constexpr double ac2_rel = 1e-10;
constexpr double ac4_min_ratio = 3.5;
constexpr double ac5_rel = 1e-4;
// The control drops the ∂λ line; it has to miss by far more than ac5_rel.
constexpr double ac5_control_min_rel = 1e-2;
constexpr double ac6_residual = 1e-13;
constexpr double ac7_rel = 1e-6;
constexpr double ac8_null = 1e-10;
constexpr double ac8_proper_rel = 1e-8;
constexpr double ac8_min_order = 3.8;
// Halving ε must shrink ΔL by at least this factor (4 for second order, 2 for first).
constexpr double ac8_min_shrink = 3.3;
constexpr double ac8_covariance_rel = 1e-13;
}  // namespace tol

namespace {

struct Outcome {
  bool passed = false;
  std::string summary;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string paren(double v) { return "(" + format_double(v) + ")"; }

double rel_err(Complex a, Complex b, double scale) { return std::abs(a - b) / scale; }

// ---------------------------------------------------------------- AC1

using core::ExactLabel;
using core::ExactValue;
using core::Rational;
using core::ScaledValue;
using core::StructureLabel;

// Field axioms as (lhs, rhs) pairs built only from scaled_arith.
template <class S>
std::vector<std::pair<core::BasicScaledValue<S>, core::BasicScaledValue<S>>> axiom_pairs(
    const core::BasicScaledValue<S>& u, const core::BasicScaledValue<S>& v, const core::BasicScaledValue<S>& w) {
  using core::ArithKind;
  const auto add = [](const auto& a, const auto& b) { return core::scaled_arith(ArithKind::Add, a, b); };
  const auto mul = [](const auto& a, const auto& b) { return core::scaled_arith(ArithKind::Mul, a, b); };
  const auto inv = [](const auto& a) { return core::scaled_arith(ArithKind::Inv, a); };
  const auto conj = [](const auto& a) { return core::scaled_arith(ArithKind::Conj, a); };
  const auto zero = core::zero(u.label);
  const auto one = core::identity(u.label);
  return {
      {add(u, v), add(v, u)},
      {add(add(u, v), w), add(u, add(v, w))},
      {add(u, zero), u},
      {add(u, core::negate(u)), zero},
      {mul(u, v), mul(v, u)},
      {mul(mul(u, v), w), mul(u, mul(v, w))},
      {mul(u, one), u},
      {mul(u, inv(u)), one},
      {mul(u, add(v, w)), add(mul(u, v), mul(u, w))},
      {conj(conj(u)), u},
      {conj(mul(u, v)), mul(conj(u), conj(v))},
      {conj(add(u, v)), add(conj(u), conj(v))},
  };
}

Outcome ac1() {
  std::mt19937_64 rng = check_rng(1, 0);
  std::uniform_int_distribution<int> numer(-40, 40), denom(1, 40);
  const auto nonzero_q = [&] {
    int n = 0;
    while (n == 0) n = numer(rng);
    return Rational(n, denom(rng));
  };
  std::size_t exact_failures = 0;
  double float_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ExactLabel el(nonzero_q(), nonzero_q());
    const ExactValue eu(nonzero_q(), el), ev(nonzero_q(), el), ew(nonzero_q(), el);
    for (const auto& [l, r] : axiom_pairs(eu, ev, ew)) {
      if (l.raw != r.raw || !(l.label == r.label)) ++exact_failures;
    }

    const Complex t = std::polar(std::exp(uniform(rng, -3, 3)), uniform(rng, -3.1, 3.1));
    const Complex s = std::polar(std::exp(uniform(rng, -3, 3)), uniform(rng, -3.1, 3.1));
    const StructureLabel fl(t, s);
    const Complex rho = fl.ratio();
    // Operands of the same order as the identity ρ.
    const auto operand = [&] { return ScaledValue(rho * std::polar(uniform(rng, 0.5, 2.0), uniform(rng, -3.1, 3.1)), fl); };
    const ScaledValue u = operand(), v = operand(), w = operand();
    for (const auto& [l, r] : axiom_pairs(u, v, w)) float_worst = std::max(float_worst, rel_err(l.raw, r.raw, std::abs(rho)));
  }
  return {exact_failures == 0 && float_worst < tol::ac1_float_rel,
          "200 labels x 12 axioms: exact mismatches=" + std::to_string(exact_failures) +
              ", float max rel=" + num(float_worst) + " (tol " + num(tol::ac1_float_rel) + ")"};
}

// ---------------------------------------------------------------- AC2

Outcome ac2() {
  std::mt19937_64 rng = check_rng(2, 0);
  double worst = 0.0;
  double identity_worst = 0.0;
  const std::vector<core::AnalyticSeries> fns{core::AnalyticSeries::exp(), core::AnalyticSeries::sin(),
                                              core::AnalyticSeries::cos()};
  for (int i = 0; i < 100; ++i) {
    const Complex t = std::polar(std::exp(uniform(rng, -2, 2)), uniform(rng, -3.1, 3.1));
    const Complex s = std::polar(std::exp(uniform(rng, -2, 2)), uniform(rng, -3.1, 3.1));
    const StructureLabel unscaled = StructureLabel::unscaled(t);
    const Complex rho = t / s;
    // The unscaled identity is 1, so operands are of order 1.
    const auto operand = [&] { return ScaledValue(Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)), unscaled); };
    const ScaledValue u = operand(), v = operand();
    const auto z = [&](const ScaledValue& a) { return core::rescale(a, s); };
    const double scale = std::abs(rho);
    const auto track = [&](const ScaledValue& a, const ScaledValue& b) {
      worst = std::max(worst, rel_err(a.raw, b.raw, scale * std::max(1.0, std::abs(b.raw) / scale)));
    };
    track(z(core::add(u, v)), core::add(z(u), z(v)));
    track(z(core::multiply(u, v)), core::multiply(z(u), z(v)));
    track(z(core::inverse(u)), core::inverse(z(u)));
    track(z(core::conjugate(u)), core::conjugate(z(u)));
    for (const auto& f : fns) track(z(core::eval_analytic(f, u)), core::eval_analytic(f, z(u)));

    // sin² + cos² is the identity ρ of the scaled structure.
    const ScaledValue su = core::eval_analytic(core::AnalyticSeries::sin(), z(u));
    const ScaledValue cu = core::eval_analytic(core::AnalyticSeries::cos(), z(u));
    const ScaledValue sum = core::add(core::multiply(su, su), core::multiply(cu, cu));
    identity_worst = std::max(identity_worst, rel_err(sum.raw, rho, scale));
  }
  return {worst < tol::ac2_rel && identity_worst < tol::ac2_rel,
          "100 cases: rescale commutation max rel=" + num(worst) + ", sin^2+cos^2=rho max rel=" + num(identity_worst) +
              " (tol " + num(tol::ac2_rel) + ")"};
}

// ---------------------------------------------------------------- AC3

Outcome ac3() {
  std::mt19937_64 rng = check_rng(3, 0);
  const std::array<Complex, 3> levels{Complex(1.0), Complex(2.0, 1.0), Complex(1e-3)};
  std::size_t mismatches = 0, comparisons = 0;
  for (int i = 0; i < 20; ++i) {
    const ScalingField f =
        ScalingField::parse(random_sinusoid_sum(rng, 2, 3, 1.0, 2.0), random_sinusoid_sum(rng, 2, 3, 1.0, 2.0));
    const Point x{uniform(rng, -1, 1), uniform(rng, -1, 1), 0, 0};
    const Point y{uniform(rng, -1, 1), uniform(rng, -1, 1), 0, 0};
    for (int mu = 0; mu < 2; ++mu) {
      const Complex ref = structure_derivative(f, x, mu, levels[0]);
      for (const Complex c : levels) {
        ++comparisons;
        if (structure_derivative(f, x, mu, c) != ref) ++mismatches;
      }
    }
    const Complex ref = transport_factor(f, y, x, levels[0]);
    for (const Complex c : levels) {
      ++comparisons;
      if (transport_factor(f, y, x, c) != ref) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(comparisons) + " comparisons over c in {1, 2+i, 1e-3}: bit mismatches=" +
                               std::to_string(mismatches)};
}

// ---------------------------------------------------------------- AC4

FlatGrid unit_square(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n - 1);
  return FlatGrid(GridSpec{2, {n, n, 1, 1}, {h, h, 1, 1}, {}});
}

Outcome ac4() {
  std::mt19937_64 rng = check_rng(4, 0);
  CouplingSet c;
  c.a_a = 0.8;
  c.a_b = 1.3;
  c.a_p = 0.7;
  const GaugeBackground bg = GaugeBackground::from_scaling(ScalingField::parse("0.2*sin(x0+x1)", "0.3*cos(x1)"),
                                                           CovectorField::parse({"x1", "0.5", "0", "0"}));
  const MatterField analytic = MatterField::scalar(ComplexField::parse("cos(x0)*exp(0.3*x1)", "sin(2*x1)"));
  double worst_ratio = std::numeric_limits<double>::infinity();
  std::size_t A_changes = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const RealFieldPtr a_fn = AnalyticField::parse(random_sinusoid_sum(rng, 2, 3, 1.0, 2.0));
    const RealFieldPtr b_fn = AnalyticField::parse(random_sinusoid_sum(rng, 2, 3, 1.0, 2.0));
    std::array<double, 2> err{};
    const std::array<std::size_t, 2> sizes{64, 127};
    for (std::size_t level = 0; level < 2; ++level) {
      const FlatGrid g = unit_square(sizes[level]);
      const MatterField psi = analytic.sampled_on(g);
      const GaugeTransformed t = gauge_transform(psi, bg, a_fn, b_fn, c);
      const Region r = Region::interior(g, 1);
      for (std::size_t k = 0; k < g.size(); ++k) {
        const Point x = g.point(k);
        if (!(t.bg.A.value(x) == bg.A.value(x))) ++A_changes;
        if (!r.contains(g.site(k))) continue;
        const Complex U = std::exp(Complex(0.0, -(a_fn->value(x) + b_fn->value(x))));
        for (int mu = 0; mu < 2; ++mu) {
          const Complex lhs = scalar_covariant_derivative(t.psi, t.bg, c, x, mu);
          const Complex rhs = U * scalar_covariant_derivative(psi, bg, c, x, mu);
          err[level] = std::max(err[level], std::abs(lhs - rhs));
        }
      }
    }
    worst_ratio = std::min(worst_ratio, err[0] / err[1]);
  }
  return {worst_ratio >= tol::ac4_min_ratio && A_changes == 0,
          "10 gauge functions, 64^2 -> 127^2: min error ratio=" + num(worst_ratio) + " (min " +
              num(tol::ac4_min_ratio) + "), A changes=" + std::to_string(A_changes)};
}

// ---------------------------------------------------------------- AC5

std::string bump_expr(const Point& lo, const Point& hi, double amplitude) {
  std::string e = paren(amplitude);
  for (std::size_t a = 0; a < 2; ++a) {
    e += "*sin(" + paren(std::numbers::pi / (hi[a] - lo[a])) + "*(x" + std::to_string(a) + " - " + paren(lo[a]) +
         "))^2";
  }
  return e;
}

Outcome ac5() {
  std::mt19937_64 rng = check_rng(5, 0);
  double worst = 0.0;
  double control_best = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 5; ++trial) {
    const ScalingField scaling =
        ScalingField::parse(random_sinusoid_sum(rng, 2, 2, 1.0, 2.0), random_sinusoid_sum(rng, 2, 2, 1.0, 2.0));
    const GaugeBackground bg = GaugeBackground::from_scaling(scaling);
    CouplingSet c;
    c.a_a = uniform(rng, -1.0, 1.0);
    c.a_b = uniform(rng, -1.0, 1.0);
    c.m = uniform(rng, 0.2, 2.0);
    const std::string re = "1 + " + random_sinusoid_sum(rng, 2, 2, 0.5, 2.0);
    const std::string im = random_sinusoid_sum(rng, 2, 2, 0.5, 2.0);
    const MatterField psi = MatterField::scalar(ComplexField::parse(re, im));

    const Point lo{uniform(rng, -0.5, 0.0), uniform(rng, -0.5, 0.0), 0, 0};
    const Point hi{lo[0] + uniform(rng, 0.5, 1.0), lo[1] + uniform(rng, 0.5, 1.0), 0, 0};
    const std::string bre = bump_expr(lo, hi, uniform(rng, 0.5, 1.5));
    const std::string bim = bump_expr(lo, hi, uniform(rng, -1.0, 1.0));
    const Point x_ref{uniform(rng, lo[0], hi[0]), uniform(rng, lo[1], hi[1]), 0, 0};

    const std::size_t n = 129;
    GridSpec spec;
    spec.dim = 2;
    for (std::size_t a = 0; a < 2; ++a) {
      spec.extents[a] = n;
      spec.spacing[a] = (hi[a] - lo[a]) / static_cast<double>(n - 1);
      spec.origin[a] = lo[a];
    }
    const FlatGrid grid(spec);
    const Region region = Region::whole(grid);

    // Gateaux derivative in the ψ* slot by a central difference.
    const double eps = 1e-3;
    const auto chi = [&](double e) {
      return MatterField::scalar(ComplexField::parse("(" + re + ") + " + paren(e) + "*(" + bre + ")",
                                                     "-(" + im + ") + " + paren(e) + "*(" + bim + ")"));
    };
    const MatterField plus = chi(eps), minus = chi(-eps);
    const Complex s_plus = scaled_action(
        grid, region, [&](const Point& y) { return kg_density(psi, plus, bg, c, y); }, scaling, x_ref);
    const Complex s_minus = scaled_action(
        grid, region, [&](const Point& y) { return kg_density(psi, minus, bg, c, y); }, scaling, x_ref);
    const Complex gateaux = (s_plus - s_minus) / (2.0 * eps);

    const ComplexField bump = ComplexField::parse(bre, bim);
    const auto residual_integral = [&](const ScalingField& in_eom) {
      return scaled_action(
          grid, region, [&](const Point& y) { return -kg_eom_residual(psi, bg, c, in_eom, y) * bump.value(y); },
          scaling, x_ref);
    };
    const Complex full = residual_integral(scaling);
    const Complex control = residual_integral(ScalingField::trivial());
    worst = std::max(worst, std::abs(gateaux - full) / std::abs(full));
    control_best = std::min(control_best, std::abs(gateaux - control) / std::abs(gateaux));
  }
  return {worst <= tol::ac5_rel && control_best >= tol::ac5_control_min_rel,
          "5 configurations: max rel=" + num(worst) + " (tol " + num(tol::ac5_rel) +
              "); without the dlambda line min rel=" + num(control_best) + " (must exceed " +
              num(tol::ac5_control_min_rel) + ")"};
}

// ---------------------------------------------------------------- AC6

Outcome ac6() {
  const auto forms = [](double a) {
    CouplingSet c;
    c.a_a = c.a_b = a;
    return std::pair{dirac_equation_form(c, DiracVariant::psi_eq), dirac_equation_form(c, DiracVariant::psibar_eq)};
  };
  const auto [psi0, bar0] = forms(0.0);
  const auto [psi1, bar1] = forms(1.0);
  bool symbolic = psi0.to_string() == "(i gamma^mu d_mu - m) psi = 0" &&
                  bar0.to_string() == "(d_mu + A_mu + i B_mu) psibar i gamma^mu + m psibar = 0" &&
                  psi1.to_string() == "(i gamma^mu (d_mu + A_mu + i B_mu) - m) psi = 0" &&
                  bar1.to_string() == "d_mu psibar i gamma^mu + m psibar = 0";

  // Numeric side: the uncoupled equation of each pair matches the free
  // residual on a flat background.
  const ScalingField scaling = ScalingField::parse("0.3*sin(x0) + 0.2*x1", "0.4*cos(x1) - 0.1*x0");
  const GaugeBackground bg = GaugeBackground::from_scaling(scaling);
  const GaugeBackground flat_bg = GaugeBackground::from_scaling(ScalingField::trivial());
  const auto comp = [](const char* re, const char* im) { return ComplexField::parse(re, im); };
  const MatterField psi = MatterField::spinor({comp("cos(x0)", "x1"), comp("x0*x1", "sin(x1)"),
                                               comp("exp(-x1)", "0.5"), comp("1", "x0^2")});
  const MatterField bar = MatterField::spinor({comp("x1", "cos(x0+x1)"), comp("0.3", "x0"),
                                               comp("sin(x0)", "-x1"), comp("x0^2", "1")});
  CouplingSet c0, c1;
  c0.a_a = c0.a_b = 0.0;
  c1.a_a = c1.a_b = 1.0;
  c0.m = c1.m = 0.7;
  double worst = 0.0;
  for (const Point& x : {Point{0.2, 0.4, 0, 0}, Point{-0.3, 0.8, 0, 0}, Point{0.6, -0.5, 0, 0}}) {
    const auto diff = [&](const Spinor& a, const Spinor& b) {
      for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    };
    diff(dirac_eom_residual(psi, bar, bg, c0, scaling, DiracVariant::psi_eq, x),
         dirac_eom_residual(psi, bar, flat_bg, c0, ScalingField::trivial(), DiracVariant::psi_eq, x));
    diff(dirac_eom_residual(psi, bar, bg, c1, scaling, DiracVariant::psibar_eq, x),
         dirac_eom_residual(psi, bar, flat_bg, c1, ScalingField::trivial(), DiracVariant::psibar_eq, x));
  }
  symbolic = symbolic && psi0 == DiracEquationForm{DiracVariant::psi_eq, 0.0, 0.0, -1} &&
             bar0 == DiracEquationForm{DiracVariant::psibar_eq, 1.0, 1.0, +1} &&
             psi1 == DiracEquationForm{DiracVariant::psi_eq, 1.0, 1.0, -1} &&
             bar1 == DiracEquationForm{DiracVariant::psibar_eq, 0.0, 0.0, +1};
  return {symbolic && worst <= tol::ac6_residual,
          std::string("a=0 and a=1 equation pairs ") + (symbolic ? "match" : "DIFFER") +
              "; free-reduction residual max=" + num(worst) + " (tol " + num(tol::ac6_residual) + ")"};
}

// ---------------------------------------------------------------- AC7

Outcome ac7() {
  std::mt19937_64 rng = check_rng(7, 0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    CouplingSet c;
    c.a_a = uniform(rng, 0.2, 2.0);
    c.a_b = uniform(rng, 0.2, 2.0);
    c.mu = uniform(rng, 0.3, 2.5);
    c.quartic = uniform(rng, 0.3, 2.5);
    const double v = c.mu / std::sqrt(c.quartic);
    const HiggsSpectrum s = higgs_mass_spectrum(c);
    const auto r = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    worst = std::max({worst, r(s.A_mass2, (c.a_a * v) * (c.a_a * v)), r(s.Bprime_mass2, (c.a_b * v) * (c.a_b * v)),
                      r(s.mixing, c.a_a * v), r(s.theta_coefficient, c.mu * c.mu)});
  }
  return {worst <= tol::ac7_rel, "5 coupling sets: A, B', mixing and theta coefficients max rel=" + num(worst) +
                                     " (tol " + num(tol::ac7_rel) + ")"};
}

// ---------------------------------------------------------------- AC8

Outcome ac8a(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const GeoScalingField alpha = GeoScalingField::parse(random_sinusoid_sum(rng, 4, 3, 1.0, 2.0));
    const double th = uniform(rng, 0.0, std::numbers::pi), ph = uniform(rng, 0.0, 2 * std::numbers::pi);
    const std::array<double, 3> n{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    std::array<std::string, 4> comps{"s"};
    for (std::size_t a = 0; a < 3; ++a) comps[a + 1] = paren(uniform(rng, -1, 1)) + " + " + paren(n[a]) + "*s";
    const PathSample p = PathSample::from_expressions(comps, 0.0, uniform(rng, 0.5, 2.0), 65);
    worst = std::max(worst, std::abs(path_length(p, alpha, p.points.front(), CausalKind::spacelike).value));
  }
  return {worst < tol::ac8_null, "(a) 50 null paths max |L|=" + num(worst)};
}

Outcome ac8b(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    // α ≡ c on the x2 = 0 plane holding the path; x_ref sits off that plane.
    const double c = uniform(rng, -1, 1), k = uniform(rng, -1, 1);
    const GeoScalingField alpha = GeoScalingField::parse(paren(c) + " + " + paren(k) + "*x2");
    const double T = uniform(rng, 0.5, 2.0);
    // Hyperbola: unit-speed in proper time.
    const PathSample p = PathSample::from_expressions({"sinh(s)", "cosh(s)", "0", "0"}, 0.0, T, 129);
    const Point x_ref{0.0, 0.0, uniform(rng, -1, 1), 0.0};
    const double expected = std::exp(c - alpha.value(x_ref)) * T;
    worst = std::max(worst, std::abs(proper_time(p, alpha, x_ref, T).value - expected) / expected);
  }
  return {worst <= tol::ac8_proper_rel, "(b) proper time max rel=" + num(worst)};
}

Outcome ac8c(std::mt19937_64& rng) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 5; ++i) {
    const GeoScalingField alpha = GeoScalingField::parse(random_sinusoid_sum(rng, 4, 3, 0.3, 1.5));
    const GeodesicState s0 =
        GeodesicState::timelike(Point{}, Vector4{1.0, uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4), 0.0});
    const double tau = 1.0;
    const auto end = [&](double h) { return geodesic_integrate(s0, alpha, 0.0, tau, h).path.points.back(); };
    const Point a = end(tau / 8), b = end(tau / 16), c = end(tau / 32);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      e1 = std::max(e1, std::abs(a[mu] - b[mu]));
      e2 = std::max(e2, std::abs(b[mu] - c[mu]));
    }
    worst = std::min(worst, std::log2(e1 / e2));
  }
  return {worst >= tol::ac8_min_order, "(c) min observed order=" + num(worst)};
}

double bumped_change(const PathSample& g, const GeoScalingField& alpha, const Vector4& dir, double eps, double base) {
  PathSample p = g;
  const double t0 = g.param.front(), T = g.param.back() - t0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = std::numbers::pi * (g.param[i] - t0) / T;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      p.points[i][mu] += eps * std::sin(s) * std::sin(s) * dir[mu];
      p.velocities[i][mu] += eps * std::numbers::pi / T * std::sin(2.0 * s) * dir[mu];
    }
  }
  return path_length(p, alpha, g.points.front(), CausalKind::timelike).value - base;
}

Outcome ac8d(std::mt19937_64& rng) {
  const GeoScalingField alpha = GeoScalingField::parse("0.2*sin(x1) + 0.1*x0*x2");
  const double tau = 1.0;
  const PathSample geo =
      geodesic_integrate(GeodesicState::timelike(Point{}, Vector4{1.0, 0.3, 0.1, 0.0}), alpha, 0.0, tau, tau / 400).path;
  const double base = path_length(geo, alpha, geo.points.front(), CausalKind::timelike).value;
  const double eps = 1e-2;
  double min_shrink = std::numeric_limits<double>::infinity(), C = 0.0;
  for (int i = 0; i < 20; ++i) {
    Vector4 dir{};
    for (double& d : dir) d = uniform(rng, -1.0, 1.0);
    const double d1 = bumped_change(geo, alpha, dir, eps, base);
    const double d2 = bumped_change(geo, alpha, dir, eps / 2, base);
    min_shrink = std::min(min_shrink, std::abs(d1) / std::abs(d2));
    C = std::max(C, std::abs(d1) / (eps * eps));
  }
  return {min_shrink >= tol::ac8_min_shrink,
          "(d) 20 bumps: |dL| <= " + num(C) + "*eps^2, min shrink on halving=" + num(min_shrink)};
}

Outcome ac8e(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GeoScalingField alpha = GeoScalingField::parse(random_sinusoid_sum(rng, 4, 3, 1.0, 2.0));
    const PathSample p = PathSample::from_expressions({"2*s", "0.5*s^2", "0.3*sin(s)", "0"}, 0.0, 1.0, 65);
    const Point x{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), 0.0};
    const Point z{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), 0.0};
    const double lx = path_length(p, alpha, x, CausalKind::timelike).value;
    const double lz = path_length(p, alpha, z, CausalKind::timelike).value;
    const double expected = lx * std::exp(alpha.value(x) - alpha.value(z));
    worst = std::max(worst, std::abs(lz - expected) / std::abs(expected));
    const double tx = proper_time(p, alpha, x, 1.0).value;
    const double tz = proper_time(p, alpha, z, 1.0).value;
    worst = std::max(worst, std::abs(tz - tx * std::exp(alpha.value(x) - alpha.value(z))) / std::abs(tz));
  }
  return {worst <= tol::ac8_covariance_rel, "(e) reference change max rel=" + num(worst)};
}

Outcome ac8() {
  std::mt19937_64 rng = check_rng(8, 0);
  const std::vector<Outcome> parts{ac8a(rng), ac8b(rng), ac8c(rng), ac8d(rng), ac8e(rng)};
  Outcome out{true, ""};
  for (const Outcome& p : parts) {
    out.passed = out.passed && p.passed;
    out.summary += (out.summary.empty() ? "" : "; ") + p.summary + (p.passed ? "" : " [FAIL]");
  }
  return out;
}

// ---------------------------------------------------------------- AC9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const fs::path& config, const fs::path& out, const std::string& extra) {
  const std::string cmd = std::string("\"") + SCALEON_CLI_PATH + "\" \"" + config.string() + "\" --out \"" +
                          out.string() + "\" --seed 7 " + extra + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome ac9() {
  const fs::path root = fs::path(SCALEON_TEST_TMP) / "acceptance_ac9";
  fs::remove_all(root);
  std::size_t configs = 0, files = 0, differences = 0, failures = 0;
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(SCALEON_CONFIG_DIR)) {
    if (entry.path().extension() == ".ini") inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());
  for (const fs::path& cfg : inputs) {
    ++configs;
    const std::string stem = cfg.stem().string();
    const fs::path a = root / (stem + "_a"), b = root / (stem + "_b"), p = root / (stem + "_p");
    if (run_cli(cfg, a, "") != 0 || run_cli(cfg, b, "") != 0 || run_cli(cfg, p, "--parallel") != 0) ++failures;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const std::string ref = slurp(entry.path());
      const fs::path name = entry.path().filename();
      if (ref != slurp(b / name) || ref != slurp(p / name)) ++differences;
    }
  }
  return {configs > 0 && files > 0 && differences == 0 && failures == 0,
          std::to_string(configs) + " configs, " + std::to_string(files) +
              " files x 3 runs (two serial, one parallel): differing files=" + std::to_string(differences) +
              ", failed runs=" + std::to_string(failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all = all && o.passed;
    std::printf("%s %s %s\n", name, o.passed ? "PASS" : "FAIL", o.summary.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
