#include "scaleon/scaling_field.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "scaleon/csv.hpp"
#include "scaleon/error.hpp"

namespace scaleon {

ScalingField::ScalingField(RealFieldPtr alpha, RealFieldPtr beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (!alpha_ || !beta_) fail(ErrorCode::InvalidArgument, "scaling field needs alpha and beta");
}

ScalingField ScalingField::parse(std::string_view alpha, std::string_view beta) {
  return {AnalyticField::parse(alpha), AnalyticField::parse(beta)};
}

ScalingField ScalingField::trivial() {
  return {AnalyticField::constant(0.0), AnalyticField::constant(0.0)};
}

namespace {

void require_domain(const ScalingField& field, const Point& x) {
  if (!field.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the scaling-field domain");
}

// Central difference of f along `axis` with step h; on a grid the step is
// k·spacing and the stencil turns one-sided at the boundary.
double stepped_derivative(const RealField& f, const Point& x, int axis, double h) {
  Point plus = x, minus = x;
  plus[static_cast<std::size_t>(axis)] += h;
  minus[static_cast<std::size_t>(axis)] -= h;
  const bool has_plus = f.contains(plus);
  const bool has_minus = f.contains(minus);
  if (has_plus && has_minus) return (f.value(plus) - f.value(minus)) / (2.0 * h);
  Point plus2 = x, minus2 = x;
  plus2[static_cast<std::size_t>(axis)] += 2.0 * h;
  minus2[static_cast<std::size_t>(axis)] -= 2.0 * h;
  if (has_plus && f.contains(plus2)) {
    return (-3.0 * f.value(x) + 4.0 * f.value(plus) - f.value(plus2)) / (2.0 * h);
  }
  if (has_minus && f.contains(minus2)) {
    return (3.0 * f.value(x) - 4.0 * f.value(minus) + f.value(minus2)) / (2.0 * h);
  }
  fail(ErrorCode::OutOfDomain, "finite-difference stencil leaves the domain");
}

void check_step(const RealField& f, const Point& x, int dim, double h) {
  if (!(h > 0.0)) fail(ErrorCode::StepTooSmall, "finite-difference step must be positive");
  if (const auto* grid_field = dynamic_cast<const GridField*>(&f)) {
    const FlatGrid& grid = grid_field->grid();
    for (int a = 0; a < grid.dim(); ++a) {
      const double k = h / grid.spacing(a);
      if (k < 1.0 - 1e-9) fail(ErrorCode::StepTooSmall, "step is below the grid spacing");
      if (std::abs(k - std::round(k)) > 1e-9) {
        fail(ErrorCode::StepTooSmall, "step must be a multiple of the grid spacing");
      }
    }
    return;
  }
  for (int a = 0; a < dim; ++a) {
    const double scale = std::max(1.0, std::abs(x[static_cast<std::size_t>(a)]));
    if (h <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      fail(ErrorCode::StepTooSmall, "step underflows the coordinate resolution");
    }
  }
}

}  // namespace

Complex eval_lambda(const ScalingField& field, const Point& x) {
  require_domain(field, x);
  return {field.alpha().value(x), field.beta().value(x)};
}

Complex eval_g(const ScalingField& field, const Point& x) { return std::exp(eval_lambda(field, x)); }

GradientFields grad_fields(const ScalingField& field, const Point& x, std::optional<double> step) {
  require_domain(field, x);
  GradientFields out;
  if (!step) {
    for (int mu = 0; mu < 4; ++mu) {
      out.A[static_cast<std::size_t>(mu)] = field.alpha().derivative(x, mu);
      out.B[static_cast<std::size_t>(mu)] = field.beta().derivative(x, mu);
    }
    out.provenance = field.is_analytic() ? Provenance::analytic : Provenance::finite_difference;
    return out;
  }
  // Only active axes are differenced; analytic fields may depend on all four.
  int dim = 4;
  if (const auto* g = dynamic_cast<const GridField*>(&field.alpha())) dim = g->grid().dim();
  check_step(field.alpha(), x, dim, *step);
  check_step(field.beta(), x, dim, *step);
  for (int mu = 0; mu < dim; ++mu) {
    out.A[static_cast<std::size_t>(mu)] = stepped_derivative(field.alpha(), x, mu, *step);
    out.B[static_cast<std::size_t>(mu)] = stepped_derivative(field.beta(), x, mu, *step);
  }
  out.provenance = Provenance::finite_difference;
  return out;
}

FiberLevel::FiberLevel(Complex global, Complex exponent) : global_(global), exponent_(exponent) {
  if (global_ == Complex{}) fail(ErrorCode::InvalidScale, "fiber level 0");
}

Complex ratio(const FiberLevel& y, const FiberLevel& x) {
  const Complex relative = std::exp(y.exponent_ - x.exponent_);
  if (y.global_ == x.global_) return relative;
  return (y.global_ / x.global_) * relative;
}

FiberLevel level_at(const ScalingField& field, const Point& x, Complex global) {
  return {global, eval_lambda(field, x)};
}

Complex transport_factor(const ScalingField& field, const Point& y, const Point& x, Complex level) {
  return ratio(level_at(field, y, level), level_at(field, x, level));
}

SampledGrid build_grid(const GridConfig& config, Execution exec) {
  const FlatGrid grid(config.spec);
  RealFieldPtr alpha, beta;
  try {
    alpha = AnalyticField::parse(config.alpha);
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, std::string("alpha: ") + e.what());
  }
  try {
    beta = AnalyticField::parse(config.beta);
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, std::string("beta: ") + e.what());
  }
  auto alpha_grid = GridField::sample(grid, *alpha, exec);
  auto beta_grid = GridField::sample(grid, *beta, exec);
  ScalingField scaling(alpha_grid, beta_grid);
  return {grid, scaling, scaling.A(), scaling.B()};
}

void write_grid_csv(std::ostream& out, const SampledGrid& sampled) {
  const FlatGrid& grid = sampled.grid;
  const int dim = grid.dim();
  std::vector<std::string> header;
  for (int a = 0; a < dim; ++a) header.push_back("x" + std::to_string(a));
  header.emplace_back("alpha");
  header.emplace_back("beta");
  for (int a = 0; a < dim; ++a) header.push_back("A" + std::to_string(a));
  for (int a = 0; a < dim; ++a) header.push_back("B" + std::to_string(a));
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    for (int a = 0; a < dim; ++a) csv.cell(x[static_cast<std::size_t>(a)]);
    csv.cell(sampled.scaling.alpha().value(x)).cell(sampled.scaling.beta().value(x));
    const Covector A = sampled.A.value(x);
    const Covector B = sampled.B.value(x);
    for (int a = 0; a < dim; ++a) csv.cell(A[static_cast<std::size_t>(a)]);
    for (int a = 0; a < dim; ++a) csv.cell(B[static_cast<std::size_t>(a)]);
    csv.end_row();
  }
}

}  // namespace scaleon
