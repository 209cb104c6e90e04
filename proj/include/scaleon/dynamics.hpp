#pragma once

// Scaled Lagrangian densities, actions and equation-of-motion residuals for
// Klein-Gordon, Dirac and QED fields. All densities use the mostly-minus
// metric (+,−,−,−) unless a metric is passed explicitly.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scaleon/gauge.hpp"
#include "scaleon/kernels.hpp"
#include "scaleon/spinor.hpp"

namespace scaleon {

/// Density at one point with its named contributions; the contributions
/// sum to `density`.
struct LagrangianSample {
  Point site{};
  Complex density{};
  std::vector<std::pair<std::string, Complex>> breakdown;

  Complex breakdown_sum() const;
  /// Contribution by name; 0 when absent.
  Complex term(const std::string& name) const;
};

/// |D_μψ|² − m²|ψ|² with D from covariant_derivative, contracted with η,
/// plus its expanded breakdown: kinetic, A-coupling, B-coupling, mass-shift
/// (a_a²A² + a_b²B²)|ψ|² and mass (−m²|ψ|²). `density` is the direct form.
LagrangianSample kg_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                               const Point& x, const Metric& metric = Metric::mostly_minus());

/// The same density with ψ* replaced by an independent field χ:
/// η^{μν}(∂_μψ + κ_μψ)(∂_νχ + κ̄_νχ) − m²χψ with κ = a_aA + i·a_bB.
/// Equals the direct KG density when χ = ψ*.
Complex kg_density(const MatterField& psi, const MatterField& chi, const GaugeBackground& bg,
                   const CouplingSet& c, const Point& x, const Metric& metric = Metric::mostly_minus());

using DensityFunction = std::function<Complex(const Point&)>;

/// Per-axis quadrature weights on n equally spaced samples: composite
/// Simpson for odd n ≥ 3, trapezoid for even n, 1 for a single sample.
std::vector<double> quadrature_weights(std::size_t n, double h);

/// e^{−λ(x_ref)}·Σ_y w(y)·e^{λ(y)}·density(y) over the region.
Complex scaled_action(const FlatGrid& grid, const Region& region, const DensityFunction& density,
                      const ScalingField& scaling, const Point& x_ref, Execution exec = Execution::serial);

/// Left side of the scaled KG equation obtained by varying ψ*:
///   □ψ + (a_a∂·A + i·a_b∂·B)ψ + 2i·a_b·B·∂ψ + (m² − a_a²A² − a_b²B²)ψ
///   + ∂λ·(∂ψ + (a_aA + i·a_bB)ψ),
/// with ∂λ = ∇α + i∇β from the scaling field. Zero for exact solutions.
Complex kg_eom_residual(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                        const ScalingField& scaling, const Point& x,
                        const Metric& metric = Metric::mostly_minus());

/// ψ̄iγ^μ(∂_μ + a_aA_μ + i·a_bB_μ)ψ − mψ̄ψ; P does not enter. Breakdown:
/// kinetic, A-coupling, B-coupling, mass. The basis must use the
/// mostly-minus metric.
LagrangianSample dirac_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                  const Point& x, const SpinorBasis& basis = SpinorBasis::dirac());

enum class DiracVariant { psi_eq, psibar_eq };

/// Coefficients of one Dirac equation of motion in the form
///   psi_eq:    (iγ^μ(∂_μ + a·A_μ + i·b·B_μ) − m)ψ = 0
///   psibar_eq: (∂_μ + a·A_μ + i·b·B_μ)ψ̄ iγ^μ + mψ̄ = 0
/// where A, B are the scaling-field gradients.
struct DiracEquationForm {
  DiracVariant variant = DiracVariant::psi_eq;
  double A_coefficient = 0.0;
  double B_coefficient = 0.0;
  /// −1 for psi_eq, +1 for psibar_eq.
  int mass_sign = -1;

  bool operator==(const DiracEquationForm&) const = default;
  std::string to_string() const;
};

/// Varying ψ̄ leaves the couplings as they are; varying ψ moves the
/// derivative onto e^{λ}ψ̄ so each coupling a becomes 1 − a.
DiracEquationForm dirac_equation_form(const CouplingSet& c, DiracVariant variant);

/// Residual of the selected equation. psi_eq returns the column spinor
/// (iγ^μ(∂_μ + κ_μ) − m)ψ. psibar_eq returns the row spinor
/// (∂_μψ̄ + (∂_μλ − κ_μ)ψ̄)iγ^μ + mψ̄ where κ is the matter connection and
/// ∂λ the scaling-field gradient; psibar holds the components of ψ̄.
Spinor dirac_eom_residual(const MatterField& psi, const MatterField& psibar, const GaugeBackground& bg,
                          const CouplingSet& c, const ScalingField& scaling, DiracVariant variant,
                          const Point& x, const SpinorBasis& basis = SpinorBasis::dirac());

using FieldStrength = std::array<std::array<double, 4>, 4>;

/// G_{μν} = ∂_μP_ν − ∂_νP_μ.
FieldStrength field_strength(const CovectorField& P, const Point& x);

/// Dirac density plus the P-coupling ψ̄iγ^μ(i·a_pP_μ)ψ and the Yang-Mills
/// term −¼G_{μν}G^{μν}.
LagrangianSample qed_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                const Point& x, const SpinorBasis& basis = SpinorBasis::dirac());

/// Spinor value of a spinor-kind field; KindMismatch otherwise.
Spinor spinor_value(const MatterField& psi, const Point& x);

}  // namespace scaleon
