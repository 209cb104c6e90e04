#pragma once

// The global scaling field g(x) = exp(λ(x)), λ = α + iβ, which fixes the
// number-structure level of the fiber over each point, and its log-gradient
// A + iB that acts as the vertical part of the connection.

#include <iosfwd>
#include <optional>
#include <string>

#include "scaleon/real_field.hpp"

namespace scaleon {

class ScalingField {
 public:
  ScalingField(RealFieldPtr alpha, RealFieldPtr beta);

  static ScalingField parse(std::string_view alpha, std::string_view beta);
  /// α = β = 0: no scaling anywhere.
  static ScalingField trivial();

  const RealField& alpha() const noexcept { return *alpha_; }
  const RealField& beta() const noexcept { return *beta_; }
  const RealFieldPtr& alpha_ptr() const noexcept { return alpha_; }
  const RealFieldPtr& beta_ptr() const noexcept { return beta_; }

  bool is_analytic() const { return alpha_->is_analytic() && beta_->is_analytic(); }
  bool contains(const Point& x) const { return alpha_->contains(x) && beta_->contains(x); }

  /// A_μ = ∂_μα as a field.
  CovectorField A() const { return CovectorField::gradient_of(*alpha_); }
  /// B_μ = ∂_μβ as a field.
  CovectorField B() const { return CovectorField::gradient_of(*beta_); }

 private:
  RealFieldPtr alpha_;
  RealFieldPtr beta_;
};

/// λ(x) = α(x) + iβ(x).
Complex eval_lambda(const ScalingField& field, const Point& x);

/// g(x) = exp(λ(x)); never zero.
Complex eval_g(const ScalingField& field, const Point& x);

enum class Provenance { analytic, finite_difference };

struct GradientFields {
  Covector A{};
  Covector B{};
  Provenance provenance = Provenance::analytic;
};

/// Gradients of α and β at x. Without `step`, analytic fields give exact
/// partials and grid fields their finite-difference stencil. With `step`,
/// second-order central differences of that step are used; on grids the
/// step must be a positive multiple of the spacing.
GradientFields grad_fields(const ScalingField& field, const Point& x,
                           std::optional<double> step = std::nullopt);

/// Fiber level c·g(x), stored as the global factor c and the exponent λ(x)
/// so that ratios of levels sharing one c never touch c.
class FiberLevel {
 public:
  FiberLevel(Complex global, Complex exponent);

  const Complex& global() const noexcept { return global_; }
  const Complex& exponent() const noexcept { return exponent_; }
  Complex value() const { return global_ * std::exp(exponent_); }

  /// Level ratio y/x, i.e. the factor carrying a value from level x to y.
  friend Complex ratio(const FiberLevel& y, const FiberLevel& x);

 private:
  Complex global_;
  Complex exponent_;
};

FiberLevel level_at(const ScalingField& field, const Point& x, Complex global = 1.0);

/// c·g(y) / c·g(x) = exp(λ(y) − λ(x)); independent of the injected level c.
Complex transport_factor(const ScalingField& field, const Point& y, const Point& x,
                         Complex level = 1.0);

/// Scaling field sampled on a grid together with its finite-difference
/// gradients.
struct SampledGrid {
  FlatGrid grid;
  ScalingField scaling;
  CovectorField A;
  CovectorField B;
};

struct GridConfig {
  GridSpec spec;
  std::string alpha = "0";
  std::string beta = "0";
};

/// Deterministic in the config. Throws Error(ConfigError) for a bad spec
/// or expression.
SampledGrid build_grid(const GridConfig& config, Execution exec = Execution::serial);

/// One row per site: x0..x{dim-1}, alpha, beta, A0.., B0..
void write_grid_csv(std::ostream& out, const SampledGrid& sampled);

}  // namespace scaleon
