#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "scaleon/csv.hpp"
#include "scaleon/dynamics.hpp"
#include "scaleon/error.hpp"
#include "scaleon/higgs.hpp"
#include "scaleon/random_fields.hpp"
#include "scaleon/scaled_core.hpp"
#include "scaleon/scenario.hpp"

namespace scaleon {

namespace {

constexpr Complex I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using CheckFn = std::function<CheckResult(std::mt19937_64&)>;

CheckResult bounded(std::string name, std::string op, double measured, double tolerance) {
  return {std::move(name), std::move(op), measured, 0.0, tolerance, Criterion::at_most, measured <= tolerance, {}};
}

CheckResult at_least(std::string name, std::string op, double measured, double minimum) {
  return {std::move(name), std::move(op), measured, std::nullopt, minimum, Criterion::at_least, measured >= minimum, {}};
}

CheckResult matches(std::string name, std::string op, double measured, double expected, double rel_tol) {
  const bool ok = std::abs(measured - expected) <= rel_tol * std::abs(expected);
  return {std::move(name), std::move(op), measured, expected, rel_tol, Criterion::relative, ok, {}};
}

double rel(Complex a, Complex b, double scale = 0.0) {
  const double d = std::abs(a - b);
  const double s = std::max({std::abs(a), std::abs(b), scale});
  return s == 0.0 ? d : d / s;
}

struct Context {
  const ScenarioConfig& config;
  std::ostream* data = nullptr;
};

// ---------------------------------------------------------------- fields

std::string random_psi_component(const ScenarioConfig& c, std::uint64_t stream, double offset) {
  auto rng = check_rng(c.seed, 1000 + stream);
  return format_double(offset) + " + " + random_sinusoid_sum(rng, c.grid.dim, 3, 0.3, 1.5);
}

MatterField scalar_field(const ScenarioConfig& c) {
  if (!c.psi_re.empty()) return MatterField::scalar(ComplexField::parse(c.psi_re, c.psi_im));
  return MatterField::scalar(ComplexField::parse(random_psi_component(c, 0, 1.0), random_psi_component(c, 1, 0.5)));
}

ScalingField scaling_field(const ScenarioConfig& c) { return ScalingField::parse(c.alpha, c.beta); }

CovectorField photon_field(const ScenarioConfig& c) {
  return CovectorField::parse({c.P[0], c.P[1], c.P[2], c.P[3]});
}

GaugeBackground background(const ScenarioConfig& c) {
  GaugeBackground bg = GaugeBackground::from_scaling(scaling_field(c), photon_field(c));
  for (std::size_t a = 0; a < 3; ++a) bg.w[a] = CovectorField::parse({c.w[a][0], c.w[a][1], c.w[a][2], c.w[a][3]});
  return bg;
}

std::pair<RealFieldPtr, RealFieldPtr> gauge_functions(const ScenarioConfig& c) {
  if (c.gauge_a == "0" && c.gauge_b == "0") {
    auto rng = check_rng(c.seed, 2000);
    return {AnalyticField::parse(random_sinusoid_sum(rng, c.grid.dim, 3, 0.5, 1.5)),
            AnalyticField::parse(random_sinusoid_sum(rng, c.grid.dim, 3, 0.5, 1.5))};
  }
  return {AnalyticField::parse(c.gauge_a), AnalyticField::parse(c.gauge_b)};
}

// Random point at least `margin` spacings inside the grid box.
Point random_interior_point(std::mt19937_64& rng, const FlatGrid& grid, double margin = 2.0) {
  Point x{};
  for (int a = 0; a < grid.dim(); ++a) {
    const double lo = grid.origin()[static_cast<std::size_t>(a)] + margin * grid.spacing(a);
    const double hi = grid.origin()[static_cast<std::size_t>(a)] +
                      (static_cast<double>(grid.extent(a)) - 1.0 - margin) * grid.spacing(a);
    x[static_cast<std::size_t>(a)] = hi > lo ? uniform(rng, lo, hi) : 0.5 * (lo + hi);
  }
  return x;
}

void write_point(CsvWriter& csv, const Point& x, int dim) {
  for (int a = 0; a < dim; ++a) csv.cell(x[static_cast<std::size_t>(a)]);
}

std::vector<std::string> coordinate_header(int dim) {
  std::vector<std::string> h;
  for (int a = 0; a < dim; ++a) h.push_back("x" + std::to_string(a));
  return h;
}

// ---------------------------------------------------------------- algebra

struct LabelDraw {
  core::StructureLabel label;
  Complex rho;
};

LabelDraw random_label(std::mt19937_64& rng) {
  const double mag = std::pow(10.0, uniform(rng, -3.0, 3.0));
  const double phase = uniform(rng, -std::numbers::pi, std::numbers::pi);
  const Complex s = std::polar(std::pow(10.0, uniform(rng, -1.0, 1.0)), uniform(rng, -std::numbers::pi, std::numbers::pi));
  const Complex rho = std::polar(mag, phase);
  core::StructureLabel label(rho * s, s);
  return {label, label.ratio()};
}

Complex random_raw(std::mt19937_64& rng, Complex rho) {
  return rho * std::polar(std::pow(10.0, uniform(rng, -1.0, 1.0)), uniform(rng, -std::numbers::pi, std::numbers::pi));
}

std::vector<CheckFn> algebra_checks(const ScenarioConfig& cfg) {
  using namespace core;
  const std::size_t n = cfg.cases;
  constexpr double tol = 1e-12;
  // Each property: max relative error over n random labels and operands.
  const auto property = [n](std::string name, std::string op,
                            std::function<double(const LabelDraw&, ScaledValue, ScaledValue, ScaledValue)> err) {
    return CheckFn([=](std::mt19937_64& rng) {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const LabelDraw d = random_label(rng);
        const ScaledValue u(random_raw(rng, d.rho), d.label);
        const ScaledValue v(random_raw(rng, d.rho), d.label);
        const ScaledValue w(random_raw(rng, d.rho), d.label);
        worst = std::max(worst, err(d, u, v, w));
      }
      return bounded(name, op, worst, tol);
    });
  };
  const auto m = [](const ScaledValue& a, const ScaledValue& b) { return multiply(a, b); };
  const auto s = [](const ScaledValue& a, const ScaledValue& b) { return add(a, b); };

  std::vector<CheckFn> checks{
      property("add-associativity", "scaled_arith(add)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue v, ScaledValue w) {
                 return rel(s(s(u, v), w).raw, s(u, s(v, w)).raw, std::abs(u.raw) + std::abs(v.raw) + std::abs(w.raw));
               }),
      property("add-commutativity", "scaled_arith(add)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue v, ScaledValue) {
                 return rel(s(u, v).raw, s(v, u).raw);
               }),
      property("mul-associativity", "scaled_arith(mul)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue v, ScaledValue w) {
                 return rel(m(m(u, v), w).raw, m(u, m(v, w)).raw);
               }),
      property("mul-commutativity", "scaled_arith(mul)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue v, ScaledValue) {
                 return rel(m(u, v).raw, m(v, u).raw);
               }),
      property("distributivity", "scaled_arith(add,mul)",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue v, ScaledValue w) {
                 const double scale = std::abs(u.raw) * (std::abs(v.raw) + std::abs(w.raw)) / std::abs(d.rho);
                 return rel(m(u, s(v, w)).raw, s(m(u, v), m(u, w)).raw, scale);
               }),
      property("additive-identity", "scaled_arith(add)",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue, ScaledValue) {
                 return rel(s(u, zero(d.label)).raw, u.raw);
               }),
      property("multiplicative-identity", "scaled_arith(mul)",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue, ScaledValue) {
                 return rel(m(u, identity(d.label)).raw, u.raw);
               }),
      property("additive-inverse", "scaled_arith(add)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue, ScaledValue) {
                 return std::abs(s(u, negate(u)).raw) / std::abs(u.raw);
               }),
      property("multiplicative-inverse", "scaled_arith(inv)",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue, ScaledValue) {
                 return rel(m(u, inverse(u)).raw, d.rho);
               }),
      property("conjugation-involution", "scaled_arith(conj)",
               [&](const LabelDraw&, ScaledValue u, ScaledValue, ScaledValue) {
                 return rel(conjugate(conjugate(u)).raw, u.raw);
               }),
      property("rescale-homomorphism", "rescale",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue v, ScaledValue w) {
                 const Complex base = d.label.base() * (w.raw / d.rho);
                 const double e1 = rel(rescale(m(u, v), base).raw, m(rescale(u, base), rescale(v, base)).raw);
                 const double e2 = rel(rescale(s(u, v), base).raw, s(rescale(u, base), rescale(v, base)).raw,
                                       std::abs(rescale(u, base).raw) + std::abs(rescale(v, base).raw));
                 return std::max(e1, e2);
               }),
      property("trig-identity", "eval_analytic",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue, ScaledValue) {
                 // Keep the unit-structure argument moderate so sin, cos stay O(1).
                 const ScaledValue x(d.rho * (u.raw / d.rho) / std::max(1.0, std::abs(u.raw / d.rho)), d.label);
                 const ScaledValue sn = eval_analytic(AnalyticSeries::sin(), x);
                 const ScaledValue cs = eval_analytic(AnalyticSeries::cos(), x);
                 return rel(s(m(sn, sn), m(cs, cs)).raw, d.rho);
               }),
      property("equation-preservation", "eval_analytic",
               [&](const LabelDraw& d, ScaledValue u, ScaledValue v, ScaledValue) {
                 const Complex base = d.label.base() * (v.raw / d.rho);
                 const ScaledValue x(d.rho * (u.raw / d.rho) / std::max(1.0, std::abs(u.raw / d.rho)), d.label);
                 double worst = 0.0;
                 for (const auto& f : {AnalyticSeries::exp(), AnalyticSeries::sin(),
                                       AnalyticSeries::polynomial({1.0, -2.0, 0.5, 3.0})}) {
                   worst = std::max(worst, rel(rescale(eval_analytic(f, x), base).raw,
                                               eval_analytic(f, rescale(x, base)).raw));
                 }
                 return worst;
               }),
      CheckFn([n](std::mt19937_64& rng) {
        double failures = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const LabelDraw d = random_label(rng);
          const Complex base = d.label.base() * std::polar(2.0, uniform(rng, -3.0, 3.0));
          if (rescale(zero(d.label), base).raw != Complex{}) failures += 1.0;
          if (group_act(d.rho, Complex{}) != Complex{}) failures += 1.0;
        }
        return bounded("zero-invariance", "rescale,group_act", failures, 0.0);
      }),
      CheckFn([n](std::mt19937_64& rng) {
        // Exact backend: every axiom must hold with equality.
        double failures = 0.0;
        const auto q = [&rng] {
          return Rational(static_cast<long long>(rng() % 2001) - 1000, static_cast<long long>(rng() % 97) + 1);
        };
        for (std::size_t i = 0; i < n; ++i) {
          Rational t = q(), sb = q();
          if (t == 0) t = 1;
          if (sb == 0) sb = 1;
          const ExactLabel l(t, sb);
          const ExactValue a(q(), l), b(q(), l), c(q(), l);
          const auto mul = [](const ExactValue& x, const ExactValue& y) { return multiply(x, y); };
          const auto sum = [](const ExactValue& x, const ExactValue& y) { return add(x, y); };
          failures += mul(mul(a, b), c).raw != mul(a, mul(b, c)).raw;
          failures += mul(a, sum(b, c)).raw != sum(mul(a, b), mul(a, c)).raw;
          failures += sum(sum(a, b), c).raw != sum(a, sum(b, c)).raw;
          failures += mul(a, identity(l)).raw != a.raw;
          if (a.raw != 0) failures += mul(a, inverse(a)).raw != l.ratio();
        }
        return bounded("exact-rational-axioms", "scaled_arith<Rational>", failures, 0.0);
      }),
  };
  return checks;
}

// ---------------------------------------------------------------- gauge

double covariance_error(const ScenarioConfig& cfg, const GridSpec& spec) {
  const FlatGrid grid(spec);
  const GaugeBackground bg = background(cfg);
  const auto [a_fn, b_fn] = gauge_functions(cfg);
  const MatterField psi = scalar_field(cfg).sampled_on(grid);
  const GaugeTransformed t = gauge_transform(psi, bg, a_fn, b_fn, cfg.couplings);
  const Region inner = Region::interior(grid, 1);
  const kernels::RealTerm term = [&](std::size_t idx) {
    const Point x = grid.point(idx);
    const Complex U = std::exp(-I * (a_fn->value(x) + b_fn->value(x)));
    double worst = 0.0;
    for (int mu = 0; mu < grid.dim(); ++mu) {
      const Complex lhs = scalar_covariant_derivative(t.psi, t.bg, cfg.couplings, x, mu);
      const Complex rhs = U * scalar_covariant_derivative(psi, bg, cfg.couplings, x, mu);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
  };
  return kernels::serial::max_of(grid, inner, term);
}

GridSpec refined(const GridSpec& spec) {
  GridSpec r = spec;
  for (int a = 0; a < spec.dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    r.extents[i] = 2 * spec.extents[i] - 1;
    r.spacing[i] = 0.5 * spec.spacing[i];
  }
  return r;
}

std::vector<CheckFn> gauge_checks(const ScenarioConfig& cfg) {
  const FlatGrid grid(cfg.grid);
  std::vector<CheckFn> checks;
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const ScalingField f = scaling_field(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const GradientFields g = grad_fields(f, x);
      for (int mu = 0; mu < grid.dim(); ++mu) {
        const auto m = static_cast<std::size_t>(mu);
        worst = std::max(worst, std::abs(structure_derivative(f, x, mu) - Complex(g.A[m], g.B[m])));
      }
    }
    return bounded("structure-derivative-vs-gradient", "structure_derivative", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const ScalingField f = scaling_field(cfg);
    const std::array<Complex, 3> levels{Complex(1.0), Complex(2.0, 1.0), Complex(1e-3)};
    double mismatches = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const Point y = random_interior_point(rng, grid);
      for (int mu = 0; mu < grid.dim(); ++mu) {
        const Complex ref = structure_derivative(f, x, mu, levels[0]);
        for (const Complex& c : levels) mismatches += structure_derivative(f, x, mu, c) != ref;
      }
      const Complex ref = transport_factor(f, y, x, levels[0]);
      for (const Complex& c : levels) mismatches += transport_factor(f, y, x, c) != ref;
    }
    return bounded("level-independence", "structure_derivative,transport_factor", mismatches, 0.0);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const ScalingField f = scaling_field(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const Point y = random_interior_point(rng, grid);
      const Point z = random_interior_point(rng, grid);
      worst = std::max(worst, rel(transport_factor(f, y, x), transport_factor(f, y, z) * transport_factor(f, z, x)));
    }
    return bounded("transport-composition", "transport_factor", worst, 1e-12);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const GaugeBackground bg = background(cfg);
    const auto [a_fn, b_fn] = gauge_functions(cfg);
    const GaugeTransformed t = gauge_transform(scalar_field(cfg), bg, a_fn, b_fn, cfg.couplings);
    double changed = 0.0;
    for (int mu = 0; mu < 4; ++mu) changed += t.bg.A.component(mu) != bg.A.component(mu);
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      changed += t.bg.A.value(x) != bg.A.value(x);
    }
    return bounded("A-invariance", "gauge_transform", changed, 0.0);
  });
  checks.emplace_back([&cfg](std::mt19937_64&) {
    const double coarse = covariance_error(cfg, cfg.grid);
    const double fine = covariance_error(cfg, refined(cfg.grid));
    return at_least("gauge-covariance-order", "gauge_transform,covariant_derivative", coarse / fine, 3.5);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const GaugeBackground bg = background(cfg);
    const MatterField psi = scalar_field(cfg);
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min<std::size_t>(cfg.cases, 5); ++i) {
      const Point x = random_interior_point(rng, grid);
      for (int mu = 0; mu < grid.dim(); ++mu) {
        const Complex exact = scalar_covariant_derivative(psi, bg, cfg.couplings, x, mu);
        const double h = grid.spacing(mu);
        const auto err = [&](double step) {
          return std::abs(scalar_covariant_derivative(psi, bg, cfg.couplings, x, mu,
                                                      {DerivativeMode::symmetric_link, step}) - exact);
        };
        worst_ratio = std::min(worst_ratio, err(h) / err(0.5 * h));
      }
    }
    return at_least("symmetric-link-order", "covariant_derivative(symmetric_link)", worst_ratio, 3.5);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const GaugeBackground bg = background(cfg);
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min<std::size_t>(cfg.cases, 5); ++i) {
      const Point x = random_interior_point(rng, grid);
      for (int mu = 0; mu < grid.dim(); ++mu) {
        const Complex conn = abelian_connection(bg, cfg.couplings, x, mu);
        if (std::abs(conn) < 1e-6) continue;
        const double h = 0.1 / std::max(1.0, std::abs(conn));
        const auto err = [&](double dx) {
          return std::abs(wilson_link(bg, cfg.couplings, x, mu, dx) - (1.0 + conn * dx));
        };
        worst_ratio = std::min(worst_ratio, err(h) / err(0.5 * h));
      }
    }
    if (std::isinf(worst_ratio)) worst_ratio = 4.0;
    return at_least("wilson-link-first-order", "wilson_link", worst_ratio, 3.5);
  });
  return checks;
}

void gauge_data(const ScenarioConfig& cfg, std::ostream& out) {
  const SampledGrid sampled = build_grid({cfg.grid, cfg.alpha, cfg.beta});
  write_grid_csv(out, sampled);
}

// ---------------------------------------------------------------- KG

MatterField plane_wave(double omega, double k) {
  // e^{−i(ωx0 − kx1)}.
  const std::string phase = format_double(omega) + "*x0 - " + format_double(k) + "*x1";
  return MatterField::scalar(ComplexField::parse("cos(" + phase + ")", "-sin(" + phase + ")"));
}

// sin² window on [lo, hi] per active axis; value and first derivative vanish
// on the box boundary.
RealFieldPtr bump_field(const Point& lo, const Point& hi, int dim, double amplitude) {
  std::string e = format_double(amplitude);
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    e += "*sin(" + format_double(std::numbers::pi / (hi[i] - lo[i])) + "*(x" + std::to_string(a) + " - " +
         format_double(lo[i]) + "))^2";
  }
  return AnalyticField::parse(e);
}

struct VariationalResult {
  Complex action_difference;
  Complex residual_integral;
};

VariationalResult kg_variation(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                               const ScalingField& scaling, const Point& x_ref, const Point& lo, const Point& hi,
                               int dim, std::size_t points, const RealFieldPtr& bump_re, const RealFieldPtr& bump_im,
                               bool include_lambda_line = true) {
  GridSpec spec;
  spec.dim = dim;
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    spec.extents[i] = points;
    spec.spacing[i] = (hi[i] - lo[i]) / static_cast<double>(points - 1);
    spec.origin[i] = lo[i];
  }
  const FlatGrid grid(spec);
  const Region region = Region::whole(grid);
  const MatterField chi = MatterField::scalar(
      ComplexField(std::make_shared<LinearCombinationField>(0.0, std::vector<LinearCombinationField::Term>{
                                                                     {1.0, psi.component(0).re()}}),
                   std::make_shared<LinearCombinationField>(0.0, std::vector<LinearCombinationField::Term>{
                                                                     {-1.0, psi.component(0).im()}})));
  const MatterField chi_bumped = MatterField::scalar(ComplexField(
      std::make_shared<LinearCombinationField>(0.0, std::vector<LinearCombinationField::Term>{
                                                        {1.0, psi.component(0).re()}, {1.0, bump_re}}),
      std::make_shared<LinearCombinationField>(0.0, std::vector<LinearCombinationField::Term>{
                                                        {-1.0, psi.component(0).im()}, {1.0, bump_im}})));
  const ComplexField bump(bump_re, bump_im);
  const Complex s0 = scaled_action(
      grid, region, [&](const Point& y) { return kg_density(psi, chi, bg, c, y); }, scaling, x_ref);
  const Complex s1 = scaled_action(
      grid, region, [&](const Point& y) { return kg_density(psi, chi_bumped, bg, c, y); }, scaling, x_ref);
  const ScalingField flat = ScalingField::trivial();
  const Complex r = scaled_action(
      grid, region,
      [&](const Point& y) {
        const Complex eom = kg_eom_residual(psi, bg, c, include_lambda_line ? scaling : flat, y);
        return -eom * bump.value(y);
      },
      scaling, x_ref);
  return {s1 - s0, r};
}

std::vector<CheckFn> kg_checks(const ScenarioConfig& cfg) {
  const FlatGrid grid(cfg.grid);
  std::vector<CheckFn> checks;
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const MatterField psi = scalar_field(cfg);
    const GaugeBackground bg = background(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const LagrangianSample s = kg_lagrangian(psi, bg, cfg.couplings, random_interior_point(rng, grid));
      worst = std::max(worst, rel(s.density, s.breakdown_sum(), 1.0));
    }
    return bounded("kg-two-path", "kg_lagrangian", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const double m = cfg.couplings.m;
    const double k = uniform(rng, 0.5, 2.0);
    const double omega = std::sqrt(k * k + m * m);
    const MatterField psi = plane_wave(omega, k);
    const GaugeBackground bg = GaugeBackground::from_scaling(ScalingField::trivial());
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      worst = std::max(worst, std::abs(kg_eom_residual(psi, bg, cfg.couplings, ScalingField::trivial(),
                                                       random_interior_point(rng, grid))));
    }
    return bounded("kg-free-plane-wave", "kg_eom_residual", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const double m = cfg.couplings.m;
    const double k = uniform(rng, 0.5, 2.0);
    const double omega = std::sqrt(k * k + m * m) + uniform(rng, 0.2, 0.5);
    const MatterField psi = plane_wave(omega, k);
    const GaugeBackground bg = GaugeBackground::from_scaling(ScalingField::trivial());
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const Complex expected = (-omega * omega + k * k + m * m) * psi.value(x)[0];
      worst = std::max(worst, rel(kg_eom_residual(psi, bg, cfg.couplings, ScalingField::trivial(), x), expected));
    }
    return bounded("kg-detuned-plane-wave", "kg_eom_residual", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const MatterField psi = scalar_field(cfg);
    const GaugeBackground bg = background(cfg);
    const ScalingField scaling = scaling_field(cfg);
    Point lo{}, hi{};
    for (int a = 0; a < grid.dim(); ++a) {
      const auto i = static_cast<std::size_t>(a);
      const double span = (static_cast<double>(grid.extent(a)) - 1.0) * grid.spacing(a);
      lo[i] = grid.origin()[i] + 0.25 * span;
      hi[i] = grid.origin()[i] + 0.75 * span;
    }
    const RealFieldPtr bre = bump_field(lo, hi, grid.dim(), uniform(rng, 0.5, 1.5));
    const RealFieldPtr bim = bump_field(lo, hi, grid.dim(), uniform(rng, -1.0, 1.0));
    const Point x_ref = random_interior_point(rng, grid);
    const VariationalResult v =
        kg_variation(psi, bg, cfg.couplings, scaling, x_ref, lo, hi, grid.dim(), 129, bre, bim);
    return bounded("kg-variational-consistency", "scaled_action,kg_eom_residual",
                   rel(v.action_difference, v.residual_integral), 1e-4);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const MatterField psi = scalar_field(cfg);
    const GaugeBackground bg = background(cfg);
    const ScalingField scaling = scaling_field(cfg);
    const Region region = Region::whole(grid);
    const DensityFunction density = [&](const Point& y) { return kg_lagrangian(psi, bg, cfg.couplings, y).density; };
    const Point x = random_interior_point(rng, grid);
    const Point z = random_interior_point(rng, grid);
    const Complex sx = scaled_action(grid, region, density, scaling, x);
    const Complex sz = scaled_action(grid, region, density, scaling, z);
    const Complex expected = sx * std::exp(eval_lambda(scaling, x) - eval_lambda(scaling, z));
    return bounded("action-reference-change", "scaled_action", rel(sz, expected), 1e-12);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64&) {
    const MatterField psi = scalar_field(cfg);
    const GaugeBackground bg = background(cfg);
    const ScalingField scaling = scaling_field(cfg);
    const Region region = Region::whole(grid);
    const DensityFunction density = [&](const Point& y) { return kg_lagrangian(psi, bg, cfg.couplings, y).density; };
    const Point x = grid.point(grid.size() / 2);
    const Complex serial = scaled_action(grid, region, density, scaling, x, Execution::serial);
    const Complex parallel = scaled_action(grid, region, density, scaling, x, Execution::parallel);
    return bounded("action-serial-parallel-identity", "scaled_action", std::abs(serial - parallel), 0.0);
  });
  return checks;
}

void kg_data(const ScenarioConfig& cfg, std::ostream& out) {
  const FlatGrid grid(cfg.grid);
  const MatterField psi = scalar_field(cfg);
  const GaugeBackground bg = background(cfg);
  const ScalingField scaling = scaling_field(cfg);
  auto header = coordinate_header(grid.dim());
  for (const char* h : {"density_re", "density_im", "kinetic", "A_coupling", "B_coupling", "mass_shift", "mass",
                        "residual_re", "residual_im"}) {
    header.emplace_back(h);
  }
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const LagrangianSample s = kg_lagrangian(psi, bg, cfg.couplings, x);
    const Complex r = kg_eom_residual(psi, bg, cfg.couplings, scaling, x);
    write_point(csv, x, grid.dim());
    csv.cell(s.density.real()).cell(s.density.imag());
    for (const auto& t : s.breakdown) csv.cell(t.second.real());
    csv.cell(r.real()).cell(r.imag());
    csv.end_row();
  }
}

// ---------------------------------------------------------------- Dirac

// Positive-energy plane wave u·e^{−i(Ex0 − px1)} in the Dirac basis, spin
// along (cos χ, sin χ).
MatterField free_spinor(double m, double p, double chi) {
  const double E = std::sqrt(p * p + m * m);
  const double n = std::sqrt(E + m);
  const double xi0 = std::cos(chi), xi1 = std::sin(chi);
  // σ¹ξ = (ξ1, ξ0).
  const std::array<double, 4> u{n * xi0, n * xi1, p * xi1 / n, p * xi0 / n};
  const std::string phase = format_double(E) + "*x0 - " + format_double(p) + "*x1";
  std::array<ComplexField, 4> c;
  for (std::size_t i = 0; i < 4; ++i) {
    c[i] = ComplexField::parse(format_double(u[i]) + "*cos(" + phase + ")", format_double(-u[i]) + "*sin(" + phase + ")");
  }
  return MatterField::spinor(c);
}

MatterField transformed_spinor(const Mat4& S, const MatterField& psi) {
  std::array<ComplexField, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<LinearCombinationField::Term> re, im;
    for (std::size_t j = 0; j < 4; ++j) {
      const Complex s = S[i][j];
      const auto& c = psi.component(j);
      // (s_r + i s_i)(u + iv) = (s_r u − s_i v) + i(s_i u + s_r v).
      re.emplace_back(s.real(), c.re());
      re.emplace_back(-s.imag(), c.im());
      im.emplace_back(s.imag(), c.re());
      im.emplace_back(s.real(), c.im());
    }
    out[i] = ComplexField(std::make_shared<LinearCombinationField>(0.0, re),
                          std::make_shared<LinearCombinationField>(0.0, im));
  }
  return MatterField::spinor(out);
}

MatterField constant_spinor(const Spinor& u) {
  return MatterField::spinor({ComplexField::constant(u[0]), ComplexField::constant(u[1]), ComplexField::constant(u[2]),
                              ComplexField::constant(u[3])});
}

std::vector<CheckFn> dirac_checks(const ScenarioConfig& cfg) {
  const FlatGrid grid(cfg.grid);
  std::vector<CheckFn> checks;
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const MatterField psi = free_spinor(cfg.couplings.m, uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 3.0));
    const GaugeBackground bg = GaugeBackground::from_scaling(ScalingField::trivial());
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      worst = std::max(worst, std::abs(dirac_lagrangian(psi, bg, cfg.couplings, x).density));
      const Spinor r = dirac_eom_residual(psi, psi, bg, cfg.couplings, ScalingField::trivial(), DiracVariant::psi_eq, x);
      for (const Complex& v : r) worst = std::max(worst, std::abs(v));
    }
    return bounded("dirac-free-on-shell", "dirac_lagrangian,dirac_eom_residual", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const MatterField psi = free_spinor(cfg.couplings.m + 0.5, uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 3.0));
    const GaugeBackground bg = background(cfg);
    const MatterField chiral = transformed_spinor(dirac_to_chiral(), psi);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const Complex a = dirac_lagrangian(psi, bg, cfg.couplings, x, SpinorBasis::dirac()).density;
      const Complex b = dirac_lagrangian(chiral, bg, cfg.couplings, x, SpinorBasis::chiral()).density;
      worst = std::max(worst, rel(a, b, 1.0));
    }
    return bounded("dirac-chiral-basis-agreement", "dirac_lagrangian", worst, 1e-12);
  });
  checks.emplace_back([](std::mt19937_64&) {
    double worst = 0.0;
    for (const Metric& m : {Metric::mostly_minus(), Metric::mostly_plus()}) {
      worst = std::max({worst, SpinorBasis::dirac(m).clifford_defect(), SpinorBasis::chiral(m).clifford_defect()});
    }
    return bounded("clifford-algebra", "SpinorBasis", worst, 0.0);
  });
  checks.emplace_back([](std::mt19937_64&) {
    double mismatches = 0.0;
    CouplingSet zero, one;
    zero.a_a = zero.a_b = 0.0;
    one.a_a = one.a_b = 1.0;
    mismatches += !(dirac_equation_form(zero, DiracVariant::psi_eq) == DiracEquationForm{DiracVariant::psi_eq, 0, 0, -1});
    mismatches +=
        !(dirac_equation_form(zero, DiracVariant::psibar_eq) == DiracEquationForm{DiracVariant::psibar_eq, 1, 1, 1});
    mismatches += !(dirac_equation_form(one, DiracVariant::psi_eq) == DiracEquationForm{DiracVariant::psi_eq, 1, 1, -1});
    mismatches +=
        !(dirac_equation_form(one, DiracVariant::psibar_eq) == DiracEquationForm{DiracVariant::psibar_eq, 0, 0, 1});
    return bounded("dirac-special-cases", "dirac_equation_form", mismatches, 0.0);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    // With A, B taken from the scaling field the ψ̄ residual must equal the
    // residual built from the reduced coefficients (1 − a).
    const ScalingField scaling = scaling_field(cfg);
    const GaugeBackground bg = GaugeBackground::from_scaling(scaling);
    const MatterField psibar = free_spinor(cfg.couplings.m + 0.3, uniform(rng, -1.0, 1.0), uniform(rng, 0.0, 3.0));
    const DiracEquationForm form = dirac_equation_form(cfg.couplings, DiracVariant::psibar_eq);
    CouplingSet reduced = cfg.couplings;
    reduced.a_a = -form.A_coefficient;
    reduced.a_b = -form.B_coefficient;
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const Spinor r = dirac_eom_residual(psibar, psibar, bg, cfg.couplings, scaling, DiracVariant::psibar_eq, x);
      const Spinor q =
          dirac_eom_residual(psibar, psibar, bg, reduced, ScalingField::trivial(), DiracVariant::psibar_eq, x);
      for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, rel(r[k], q[k], 1.0));
    }
    return bounded("dirac-psibar-reduction", "dirac_eom_residual", worst, 1e-12);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const Spinor u{Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)), Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                   Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)), Complex(uniform(rng, -1, 1), uniform(rng, -1, 1))};
    const MatterField psi = constant_spinor(u);
    const GaugeBackground bg = GaugeBackground::from_scaling(ScalingField::trivial());
    const SpinorBasis basis = SpinorBasis::dirac();
    const Point x = random_interior_point(rng, grid);
    const Complex expected = -cfg.couplings.m * contract(basis.bar(u), u);
    return bounded("dirac-constant-spinor", "dirac_lagrangian",
                   std::abs(dirac_lagrangian(psi, bg, cfg.couplings, x).density - expected), 1e-14);
  });
  return checks;
}

void dirac_data(const ScenarioConfig& cfg, std::ostream& out) {
  const FlatGrid grid(cfg.grid);
  auto rng = check_rng(cfg.seed, 3000);
  const MatterField psi = free_spinor(cfg.couplings.m, uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 3.0));
  const ScalingField scaling = scaling_field(cfg);
  const GaugeBackground bg = GaugeBackground::from_scaling(scaling);
  auto header = coordinate_header(grid.dim());
  for (const char* h : {"density_re", "density_im", "psi_residual", "psibar_residual"}) header.emplace_back(h);
  CsvWriter csv(out, header);
  const auto norm = [](const Spinor& s) {
    double n = 0.0;
    for (const Complex& v : s) n += std::norm(v);
    return std::sqrt(n);
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const LagrangianSample s = dirac_lagrangian(psi, bg, cfg.couplings, x);
    write_point(csv, x, grid.dim());
    csv.cell(s.density.real()).cell(s.density.imag());
    csv.cell(norm(dirac_eom_residual(psi, psi, bg, cfg.couplings, scaling, DiracVariant::psi_eq, x)));
    csv.cell(norm(dirac_eom_residual(psi, psi, bg, cfg.couplings, scaling, DiracVariant::psibar_eq, x)));
    csv.end_row();
  }
}

// ---------------------------------------------------------------- QED

std::vector<CheckFn> qed_checks(const ScenarioConfig& cfg) {
  const FlatGrid grid(cfg.grid);
  std::vector<CheckFn> checks;
  const auto spinor_for = [&cfg](std::mt19937_64& rng) {
    return free_spinor(cfg.couplings.m + 0.5, uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 3.0));
  };
  checks.emplace_back([&cfg, grid, spinor_for](std::mt19937_64& rng) {
    const MatterField psi = spinor_for(rng);
    GaugeBackground bg = background(cfg);
    bg.P = CovectorField::zero();
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      worst = std::max(worst, std::abs(qed_lagrangian(psi, bg, cfg.couplings, x).density -
                                       dirac_lagrangian(psi, bg, cfg.couplings, x).density));
    }
    return bounded("qed-reduces-to-dirac", "qed_lagrangian", worst, 0.0);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const RealFieldPtr f = AnalyticField::parse(random_sinusoid_sum(rng, grid.dim(), 4, 1.0, 2.0));
    const CovectorField P = CovectorField::gradient_of(*f);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const FieldStrength G = field_strength(P, random_interior_point(rng, grid));
      for (const auto& row : G) {
        for (double g : row) worst = std::max(worst, std::abs(g));
      }
    }
    return bounded("gradient-field-strength", "field_strength", worst, 1e-12);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const double c = uniform(rng, -2.0, 2.0);
    const CovectorField P = CovectorField::parse({"0", format_double(c) + "*x0", "0", "0"});
    const FieldStrength G = field_strength(P, random_interior_point(rng, grid));
    return matches("linear-field-strength", "field_strength", G[0][1], c, 0.0);
  });
  checks.emplace_back([&cfg, grid, spinor_for](std::mt19937_64& rng) {
    const MatterField psi = spinor_for(rng);
    const GaugeBackground bg = background(cfg);
    const auto [a_fn, b_fn] = gauge_functions(cfg);
    const GaugeTransformed t = gauge_transform(psi, bg, a_fn, b_fn, cfg.couplings);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      worst = std::max(worst, rel(qed_lagrangian(psi, bg, cfg.couplings, x).density,
                                  qed_lagrangian(t.psi, t.bg, cfg.couplings, x).density, 1.0));
    }
    return bounded("qed-gauge-invariance", "qed_lagrangian,gauge_transform", worst, 1e-10);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const CovectorField P = photon_field(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const FieldStrength G = field_strength(P, random_interior_point(rng, grid));
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) worst = std::max(worst, std::abs(G[a][b] + G[b][a]));
      }
    }
    return bounded("field-strength-antisymmetry", "field_strength", worst, 0.0);
  });
  return checks;
}

void qed_data(const ScenarioConfig& cfg, std::ostream& out) {
  const FlatGrid grid(cfg.grid);
  auto rng = check_rng(cfg.seed, 3001);
  const MatterField psi = free_spinor(cfg.couplings.m + 0.5, uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 3.0));
  const GaugeBackground bg = background(cfg);
  auto header = coordinate_header(grid.dim());
  for (const char* h : {"density_re", "density_im", "P_coupling_re", "yang_mills", "G01"}) header.emplace_back(h);
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const LagrangianSample s = qed_lagrangian(psi, bg, cfg.couplings, x);
    write_point(csv, x, grid.dim());
    csv.cell(s.density.real()).cell(s.density.imag()).cell(s.term("P-coupling").real());
    csv.cell(s.term("Yang-Mills").real()).cell(field_strength(bg.P, x)[0][1]);
    csv.end_row();
  }
}

// ---------------------------------------------------------------- Higgs

MatterField higgs_field(const ScenarioConfig& cfg, std::mt19937_64& rng, double v) {
  const std::string theta = random_sinusoid_sum(rng, cfg.grid.dim, 2, 0.2 * v, 1.0);
  const std::string phi = random_sinusoid_sum(rng, cfg.grid.dim, 2, 0.5 * v, 1.0);
  const std::string r = "(" + format_double(v) + " + " + theta + ")/sqrt(2)";
  const std::string arg = "(" + phi + ")/" + format_double(v);
  return MatterField::scalar(ComplexField::parse(r + "*cos(" + arg + ")", r + "*sin(" + arg + ")"));
}

std::vector<CheckFn> higgs_checks(const ScenarioConfig& cfg) {
  const FlatGrid grid(cfg.grid);
  const CouplingSet& c = cfg.couplings;
  std::vector<CheckFn> checks;
  checks.emplace_back([c](std::mt19937_64&) {
    return matches("vacuum-value", "higgs_mass_spectrum", higgs_mass_spectrum(c).v, c.mu / std::sqrt(c.quartic), 1e-15);
  });
  checks.emplace_back([c](std::mt19937_64&) {
    const double v = c.mu / std::sqrt(c.quartic);
    const double expected = (c.a_a * v) * (c.a_a * v);
    const double got = higgs_mass_spectrum(c).A_mass2;
    if (expected == 0.0) return bounded("A-mass-coefficient", "higgs_mass_spectrum", std::abs(got), 1e-9);
    return matches("A-mass-coefficient", "higgs_mass_spectrum", got, expected, 1e-6);
  });
  checks.emplace_back([c](std::mt19937_64&) {
    const double v = c.mu / std::sqrt(c.quartic);
    const double expected = (c.a_b * v) * (c.a_b * v);
    const double got = higgs_mass_spectrum(c).Bprime_mass2;
    if (expected == 0.0) return bounded("Bprime-mass-coefficient", "higgs_mass_spectrum", std::abs(got), 1e-9);
    return matches("Bprime-mass-coefficient", "higgs_mass_spectrum", got, expected, 1e-6);
  });
  checks.emplace_back([c](std::mt19937_64&) {
    return matches("theta-mass-coefficient", "higgs_mass_spectrum", higgs_mass_spectrum(c).theta_coefficient,
                   c.mu * c.mu, 1e-6);
  });
  checks.emplace_back([c](std::mt19937_64&) {
    const double v = c.mu / std::sqrt(c.quartic);
    const double got = higgs_mass_spectrum(c).mixing;
    if (c.a_a == 0.0) return bounded("A-theta-mixing", "higgs_mass_spectrum", std::abs(got), 1e-9);
    return matches("A-theta-mixing", "higgs_mass_spectrum", got, c.a_a * v, 1e-6);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const double v = higgs_vacuum(cfg.couplings);
    const MatterField psi = higgs_field(cfg, rng, v);
    const GaugeBackground bg = background(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const HiggsExpansion e = higgs_unitary_gauge(psi, bg, v, cfg.couplings.a_b, x);
      worst = std::max(worst, rel(higgs_reconstruct(e), psi.value(x)[0]));
    }
    return bounded("unitary-gauge-reconstruction", "higgs_unitary_gauge", worst, 1e-12);
  });
  checks.emplace_back([&cfg, grid](std::mt19937_64& rng) {
    const double v = higgs_vacuum(cfg.couplings);
    const MatterField psi = higgs_field(cfg, rng, v);
    const GaugeBackground bg = background(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point x = random_interior_point(rng, grid);
      const HiggsExpansion e = higgs_unitary_gauge(psi, bg, v, cfg.couplings.a_b, x);
      const Complex p = psi.value(x)[0];
      UnitaryConfig k;
      k.theta = e.theta;
      k.A = bg.A.value(x);
      k.Bprime = e.Bprime;
      for (int mu = 0; mu < 4; ++mu) {
        // θ = √2|ψ| − v, so ∂θ = √2·Re(ψ*∂ψ)/|ψ|.
        k.dtheta[static_cast<std::size_t>(mu)] =
            std::sqrt(2.0) * std::real(std::conj(p) * psi.derivative(x, mu)[0]) / std::abs(p);
      }
      worst = std::max(worst, rel(higgs_unitary_density(k, cfg.couplings), higgs_density(psi, bg, cfg.couplings, x), 1.0));
    }
    return bounded("unitary-gauge-density", "higgs_unitary_gauge", worst, 1e-10);
  });
  return checks;
}

void higgs_data(const ScenarioConfig& cfg, std::ostream& out) {
  const HiggsSpectrum s = higgs_mass_spectrum(cfg.couplings);
  const double v = s.v;
  CsvWriter csv(out, {"quantity", "measured", "expected"});
  csv.cell(std::string_view("v")).cell(s.v).cell(cfg.couplings.mu / std::sqrt(cfg.couplings.quartic)).end_row();
  csv.cell(std::string_view("A_mass2")).cell(s.A_mass2).cell((cfg.couplings.a_a * v) * (cfg.couplings.a_a * v)).end_row();
  csv.cell(std::string_view("Bprime_mass2")).cell(s.Bprime_mass2).cell((cfg.couplings.a_b * v) * (cfg.couplings.a_b * v)).end_row();
  csv.cell(std::string_view("theta_curvature")).cell(s.theta_curvature).cell(-2.0 * cfg.couplings.mu * cfg.couplings.mu).end_row();
  csv.cell(std::string_view("theta_coefficient")).cell(s.theta_coefficient).cell(cfg.couplings.mu * cfg.couplings.mu).end_row();
  csv.cell(std::string_view("A_theta_mixing")).cell(s.mixing).cell(cfg.couplings.a_a * v).end_row();
}

// ---------------------------------------------------------------- geometry

PathSample config_path(const ScenarioConfig& cfg, std::size_t samples) {
  if (!cfg.path.table.empty()) {
    const std::filesystem::path p = cfg.base_dir / cfg.path.table;
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(ErrorCode::ConfigError, "cannot read path table " + p.string());
    return PathSample::read_csv(in);
  }
  return PathSample::from_expressions(cfg.path.components, cfg.path.s0, cfg.path.s1, samples);
}

Point random_path_point(std::mt19937_64& rng, const PathSample& p) {
  const std::size_t i = static_cast<std::size_t>(rng() % p.size());
  Point z = p.points[i];
  for (double& c : z) c += uniform(rng, -0.5, 0.5);
  return z;
}

std::vector<CheckFn> path_checks(const ScenarioConfig& cfg, bool proper) {
  std::vector<CheckFn> checks;
  const std::string op = proper ? "proper_time" : "path_length";
  const auto measure = [&cfg, proper](const PathSample& p, const Point& x_ref) {
    const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
    return proper ? proper_time(p, alpha, x_ref, p.param.back()) : path_length(p, alpha, x_ref, cfg.path.kind);
  };
  checks.emplace_back([&cfg, measure, op](std::mt19937_64&) {
    const Quadrature q = measure(config_path(cfg, cfg.path.samples), cfg.path.x_ref);
    return bounded("quadrature-error-estimate", op, q.error_estimate / std::max(1.0, std::abs(q.value)), 1e-8);
  });
  checks.emplace_back([&cfg, measure, op](std::mt19937_64& rng) {
    const PathSample p = config_path(cfg, cfg.path.samples);
    const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
    const double base = measure(p, cfg.path.x_ref).value;
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      const Point z = random_path_point(rng, p);
      const double expected = std::exp(alpha.value(cfg.path.x_ref) - alpha.value(z)) * base;
      worst = std::max(worst, rel(measure(p, z).value, expected));
    }
    return bounded("reference-point-covariance", op, worst, 1e-13);
  });
  if (cfg.path.table.empty()) {
    checks.emplace_back([&cfg, measure, op](std::mt19937_64&) {
      const double coarse = measure(config_path(cfg, cfg.path.samples), cfg.path.x_ref).value;
      const double fine = measure(config_path(cfg, 2 * cfg.path.samples - 1), cfg.path.x_ref).value;
      return bounded("refinement-agreement", op, rel(coarse, fine, 1.0), 1e-8);
    });
  }
  return checks;
}

void path_data(const ScenarioConfig& cfg, std::ostream& out, bool proper) {
  const PathSample p = config_path(cfg, cfg.path.samples);
  const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
  const double ref = alpha.value(cfg.path.x_ref);
  CsvWriter csv(out, {proper ? "tau" : "s", "p0", "p1", "p2", "p3", "v0", "v1", "v2", "v3", "weight"});
  for (std::size_t i = 0; i < p.size(); ++i) {
    csv.cell(p.param[i]);
    for (double c : p.points[i]) csv.cell(c);
    for (double c : p.velocities[i]) csv.cell(c);
    csv.cell(std::exp(alpha.value(p.points[i]) - ref));
    csv.end_row();
  }
}

bool alpha_is_constant(const ScenarioConfig& cfg) {
  const Expr e = parse_field_expression(cfg.alpha);
  for (std::size_t a = 0; a < 4; ++a) {
    if (!e.derivative(a).is_zero()) return false;
  }
  return true;
}

// Length change of the geodesic under an endpoint-fixed sin² bump along dir.
double bumped_length_change(const PathSample& g, const GeoScalingField& alpha, const Vector4& dir, double eps,
                            double base) {
  PathSample p = g;
  const double t0 = g.param.front();
  const double T = g.param.back() - t0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = std::numbers::pi * (g.param[i] - t0) / T;
    const double b = std::sin(s) * std::sin(s);
    const double db = std::numbers::pi / T * std::sin(2.0 * s);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      p.points[i][mu] += eps * b * dir[mu];
      p.velocities[i][mu] += eps * db * dir[mu];
    }
  }
  return path_length(p, alpha, g.points.front(), CausalKind::timelike).value - base;
}

std::vector<CheckFn> geodesic_checks(const ScenarioConfig& cfg) {
  std::vector<CheckFn> checks;
  const auto initial = [&cfg] { return GeodesicState::timelike(cfg.geodesic.position, cfg.geodesic.velocity); };
  const auto integrate = [&cfg, initial](double step) {
    return geodesic_integrate(initial(), GeoScalingField::parse(cfg.alpha), 0.0, cfg.geodesic.tau, step);
  };
  checks.emplace_back([integrate, &cfg](std::mt19937_64&) {
    return bounded("normalization-drift", "geodesic_integrate", integrate(cfg.geodesic.step).normalization_drift, 1e-8);
  });
  if (alpha_is_constant(cfg)) {
    checks.emplace_back([integrate, initial, &cfg](std::mt19937_64&) {
      const GeodesicRun run = integrate(cfg.geodesic.step);
      const GeodesicState s0 = initial();
      double worst = 0.0;
      for (std::size_t i = 0; i < run.path.size(); ++i) {
        for (std::size_t mu = 0; mu < 4; ++mu) {
          worst = std::max(worst, std::abs(run.path.points[i][mu] -
                                           (s0.position[mu] + s0.velocity[mu] * run.path.param[i])));
        }
      }
      return bounded("straight-line", "geodesic_integrate", worst, 1e-12);
    });
  } else {
    checks.emplace_back([integrate, &cfg](std::mt19937_64&) {
      // Coarse enough that the step-halving differences stay above roundoff.
      const double h = std::max(cfg.geodesic.step, cfg.geodesic.tau / 8.0);
      const auto end = [&](double step) { return integrate(step).path.points.back(); };
      const Point a = end(h), b = end(h / 2), c = end(h / 4);
      double e1 = 0.0, e2 = 0.0;
      for (std::size_t mu = 0; mu < 4; ++mu) {
        e1 = std::max(e1, std::abs(a[mu] - b[mu]));
        e2 = std::max(e2, std::abs(b[mu] - c[mu]));
      }
      CheckResult r = at_least("convergence-order", "geodesic_integrate", std::log2(e1 / e2), 3.8);
      r.details.emplace_back("endpoint_diff_h", e1);
      r.details.emplace_back("endpoint_diff_h2", e2);
      return r;
    });
  }
  checks.emplace_back([integrate, &cfg](std::mt19937_64&) {
    const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
    const auto worst = [&](double step) {
      double w = 0.0;
      for (const Vector4& r : el_residual(integrate(step).path, alpha)) {
        for (double v : r) w = std::max(w, std::abs(v));
      }
      return w;
    };
    const double coarse = worst(cfg.geodesic.step);
    const double fine = worst(cfg.geodesic.step / 2);
    // At the rounding floor the ratio carries no information.
    if (coarse < 1e-9) return bounded("el-residual-order", "el_residual", coarse, 1e-9);
    return at_least("el-residual-order", "el_residual", coarse / fine, 3.5);
  });
  checks.emplace_back([integrate, &cfg](std::mt19937_64& rng) {
    const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
    const PathSample g = integrate(std::min(cfg.geodesic.step, cfg.geodesic.tau / 200)).path;
    const double base = path_length(g, alpha, g.points.front(), CausalKind::timelike).value;
    const double eps = 1e-2 * cfg.geodesic.tau;
    double failures = 0.0;
    double C = 0.0;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
      Vector4 dir{};
      for (double& d : dir) d = uniform(rng, -1.0, 1.0);
      const double d1 = bumped_length_change(g, alpha, dir, eps, base);
      const double d2 = bumped_length_change(g, alpha, dir, eps / 2, base);
      // Second order: halving ε divides ΔL by 4; a first-order term would give 2.
      if (std::abs(d2) > 0.3 * std::abs(d1) + 1e-11 * std::abs(base)) failures += 1.0;
      C = std::max(C, std::abs(d1) / (eps * eps));
    }
    CheckResult r = bounded("stationarity", "path_length,geodesic_integrate", failures, 0.0);
    r.details.emplace_back("max_dL_over_eps2", C);
    return r;
  });
  return checks;
}

void geodesic_data(const ScenarioConfig& cfg, std::ostream& out) {
  const GeoScalingField alpha = GeoScalingField::parse(cfg.alpha);
  const GeodesicRun run = geodesic_integrate(GeodesicState::timelike(cfg.geodesic.position, cfg.geodesic.velocity),
                                             alpha, 0.0, cfg.geodesic.tau, cfg.geodesic.step);
  const bool residual = run.path.size() >= 5;
  const std::vector<Vector4> r = residual ? el_residual(run.path, alpha) : std::vector<Vector4>(run.path.size());
  CsvWriter csv(out, {"tau", "p0", "p1", "p2", "p3", "v0", "v1", "v2", "v3", "norm", "residual"});
  for (std::size_t i = 0; i < run.path.size(); ++i) {
    csv.cell(run.path.param[i]);
    for (double c : run.path.points[i]) csv.cell(c);
    for (double c : run.path.velocities[i]) csv.cell(c);
    csv.cell(minkowski_norm(run.path.velocities[i]));
    double n = 0.0;
    for (double v : r[i]) n = std::max(n, std::abs(v));
    csv.cell(n);
    csv.end_row();
  }
}

// ---------------------------------------------------------------- driver

struct ModePlan {
  std::vector<CheckFn> checks;
  std::string data_file;
  std::function<void(std::ostream&)> data;
};

ModePlan plan_for(const ScenarioConfig& cfg) {
  switch (cfg.mode) {
    case Mode::algebra_check: return {algebra_checks(cfg), "", {}};
    case Mode::gauge_check: return {gauge_checks(cfg), "grid.csv", [&cfg](std::ostream& o) { gauge_data(cfg, o); }};
    case Mode::kg: return {kg_checks(cfg), "kg.csv", [&cfg](std::ostream& o) { kg_data(cfg, o); }};
    case Mode::dirac: return {dirac_checks(cfg), "dirac.csv", [&cfg](std::ostream& o) { dirac_data(cfg, o); }};
    case Mode::qed: return {qed_checks(cfg), "qed.csv", [&cfg](std::ostream& o) { qed_data(cfg, o); }};
    case Mode::higgs: return {higgs_checks(cfg), "higgs.csv", [&cfg](std::ostream& o) { higgs_data(cfg, o); }};
    case Mode::length:
      return {path_checks(cfg, false), "length.csv", [&cfg](std::ostream& o) { path_data(cfg, o, false); }};
    case Mode::proper_time:
      return {path_checks(cfg, true), "proper_time.csv", [&cfg](std::ostream& o) { path_data(cfg, o, true); }};
    case Mode::geodesic:
      return {geodesic_checks(cfg), "geodesic.csv", [&cfg](std::ostream& o) { geodesic_data(cfg, o); }};
  }
  return {};
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  fill(out);
  if (!out) fail(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

}  // namespace

bool RunReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.couplings.validate();
  RunReport report;
  report.mode = config.mode;
  report.seed = config.seed;

  ModePlan plan = plan_for(config);
  const auto n = static_cast<std::ptrdiff_t>(plan.checks.size());
  std::vector<CheckResult> results(plan.checks.size());
  std::vector<std::exception_ptr> errors(plan.checks.size());
  const auto run_one = [&](std::ptrdiff_t i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      auto rng = check_rng(config.seed, k);
      results[k] = plan.checks[k](rng);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) run_one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) run_one(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& r : results) {
    if (std::isnan(r.measured)) fail(ErrorCode::NonConvergence, "check " + r.name + " produced NaN");
  }
  report.checks = std::move(results);

  std::filesystem::create_directories(options.out_dir);
  if (plan.data) {
    write_file(options.out_dir / plan.data_file, plan.data);
    report.artifacts.push_back(plan.data_file);
  }
  report.artifacts.emplace_back("report.csv");
  report.artifacts.emplace_back("report.txt");
  write_file(options.out_dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, report); });
  write_file(options.out_dir / "report.txt", [&](std::ostream& o) { write_report_text(o, report); });
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report_text(std::ostream& out, const RunReport& report) {
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.passed;
  out << "mode=" << to_string(report.mode) << '\n';
  out << "seed=" << report.seed << '\n';
  out << "checks=" << report.checks.size() << '\n';
  out << "passed=" << passed << '\n';
  out << "status=" << (report.all_passed() ? "pass" : "fail") << '\n';
  for (const auto& c : report.checks) {
    const std::string key = "check." + c.name + ".";
    out << key << "operation=" << c.operation << '\n';
    out << key << "measured=" << format_double(c.measured) << '\n';
    if (c.expected) out << key << "expected=" << format_double(*c.expected) << '\n';
    out << key << "tolerance=" << format_double(c.tolerance) << '\n';
    out << key << "criterion=" << to_string(c.criterion) << '\n';
    for (const auto& [name, value] : c.details) out << key << "detail." << name << "=" << format_double(value) << '\n';
    out << key << "result=" << (c.passed ? "pass" : "fail") << '\n';
  }
  for (const auto& a : report.artifacts) out << "artifact=" << a << '\n';
}

void write_report_csv(std::ostream& out, const RunReport& report) {
  CsvWriter csv(out, {"check", "operation", "measured", "expected", "tolerance", "criterion", "result"});
  for (const auto& c : report.checks) {
    csv.cell(c.name).cell(c.operation).cell(c.measured);
    if (c.expected) {
      csv.cell(*c.expected);
    } else {
      csv.cell(std::string_view(""));
    }
    csv.cell(c.tolerance).cell(to_string(c.criterion)).cell(std::string_view(c.passed ? "pass" : "fail"));
    csv.end_row();
  }
}

std::string_view to_string(Criterion criterion) noexcept {
  switch (criterion) {
    case Criterion::at_most: return "at_most";
    case Criterion::at_least: return "at_least";
    case Criterion::relative: return "relative";
  }
  return "?";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
      return exit_config_error;
    default:
      return exit_numeric_failure;
  }
}

}  // namespace scaleon
