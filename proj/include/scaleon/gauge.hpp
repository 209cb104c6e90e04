#pragma once

// Wilson links, Abelian and SU(2) covariant derivatives, and U(1) gauge
// transformations acting on matter fields over flat space-time.

#include <array>
#include <cstddef>
#include <vector>

#include "scaleon/real_field.hpp"
#include "scaleon/scaling_field.hpp"

namespace scaleon {

struct CouplingSet {
  double a_a = 1.0;
  double a_b = 1.0;
  double a_p = 1.0;
  double a_t = 1.0;
  double m = 0.0;
  double mu = 1.0;
  double quartic = 1.0;

  /// Throws Error(InvalidArgument) on a non-finite entry.
  void validate() const;
};

/// Connection fields seen by matter: A, B from the scaling field, the photon
/// field P (not a gradient), and the three SU(2) fields w^a.
struct GaugeBackground {
  CovectorField A;
  CovectorField B;
  CovectorField P;
  std::array<CovectorField, 3> w;

  static GaugeBackground from_scaling(const ScalingField& scaling, CovectorField P = CovectorField::zero());

  bool contains(const Point& x) const;
};

enum class FieldKind { scalar, doublet, spinor };

std::size_t component_count(FieldKind kind) noexcept;
const char* to_string(FieldKind kind) noexcept;

using Multiplet = std::vector<Complex>;

/// Complex scalar, SU(2) doublet or Dirac 4-spinor; the kind is fixed at
/// construction and the component count always matches it.
class MatterField {
 public:
  MatterField(FieldKind kind, std::vector<ComplexField> components);

  static MatterField scalar(ComplexField psi);
  static MatterField doublet(ComplexField up, ComplexField down);
  static MatterField spinor(std::array<ComplexField, 4> components);

  FieldKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return components_.size(); }
  const ComplexField& component(std::size_t i) const { return components_.at(i); }
  const std::vector<ComplexField>& components() const noexcept { return components_; }

  Multiplet value(const Point& x) const;
  Multiplet derivative(const Point& x, int mu) const;
  Multiplet second_derivative(const Point& x, int a, int b) const;
  bool contains(const Point& x) const;
  bool is_analytic() const;

  MatterField sampled_on(const FlatGrid& grid, Execution exec = Execution::serial) const;

  /// Throws Error(KindMismatch) unless kind() == expected.
  void require(FieldKind expected) const;

 private:
  FieldKind kind_;
  std::vector<ComplexField> components_;
};

/// a_a·A_μ + i·a_b·B_μ + i·a_p·P_μ at x.
Complex abelian_connection(const GaugeBackground& bg, const CouplingSet& c, const Point& x, int mu);

/// exp(abelian_connection(x)·dx): carries a value from x+dx·e_μ back to x.
Complex wilson_link(const GaugeBackground& bg, const CouplingSet& c, const Point& x, int mu, double dx);

enum class DerivativeMode {
  /// ∂_μψ + connection·ψ with ∂ from the field (exact or grid stencil), or
  /// a central difference when a step is given.
  continuum,
  /// (Y·ψ(x+h) − ψ(x))/h; first order.
  link,
  /// (Y₊·ψ(x+h) − Y₋·ψ(x−h))/2h; second order.
  symmetric_link,
};

struct DerivativeOptions {
  DerivativeMode mode = DerivativeMode::continuum;
  /// 0 selects the field's own derivative (continuum) or the grid spacing
  /// (link modes, grid-backed fields only).
  double step = 0.0;
};

/// Abelian covariant derivative, applied componentwise.
Multiplet covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                               const Point& x, int mu, DerivativeOptions options = {});

/// Scalar convenience overload; KindMismatch unless psi is a scalar.
Complex scalar_covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                    const Point& x, int mu, DerivativeOptions options = {});

/// Abelian derivative plus i·a_t·Σ_a w^a_μ σ^a ψ; KindMismatch unless psi
/// is a doublet.
Multiplet nonabelian_covariant_derivative(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                          const Point& x, int mu, DerivativeOptions options = {});

/// ∂_μ(c·g)/(c·g) = A_μ + iB_μ for the fiber level c·g(x). Bit-identical for
/// every c ≠ 0.
Complex structure_derivative(const ScalingField& field, const Point& x, int mu, Complex level = 1.0);

struct GaugeTransformed {
  MatterField psi;
  GaugeBackground bg;
};

/// ψ′ = e^{−i(a+b)}ψ, B′ = B + ∇a/a_b, P′ = P + ∇b/a_p; A and w are shared
/// unchanged. Analytic ψ with analytic a, b stays analytic; grid-backed ψ is
/// resampled on its own grid.
GaugeTransformed gauge_transform(const MatterField& psi, const GaugeBackground& bg, const RealFieldPtr& a_fn,
                                 const RealFieldPtr& b_fn, const CouplingSet& c);

}  // namespace scaleon
