#pragma once

// Mexican-hat scalar coupled to the scaling connection, its unitary-gauge
// decomposition and the quadratic (mass) coefficients around the vacuum.

#include "scaleon/gauge.hpp"

namespace scaleon {

/// Unitary-gauge fields at one point: ψ = (v+θ)/√2 · e^{iφ/v} and
/// B′ = B + ∂φ/(a_b·v).
struct HiggsExpansion {
  double v = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  Covector Bprime{};
};

/// v = μ/√quartic; ConfigError unless μ > 0 and quartic > 0.
double higgs_vacuum(const CouplingSet& c);

/// Throws ZeroField where ψ(x) = 0, DivisionByZero for a_b = 0.
HiggsExpansion higgs_unitary_gauge(const MatterField& psi, const GaugeBackground& bg, double v, double a_b,
                                   const Point& x);

/// (v+θ)/√2 · e^{iφ/v}.
Complex higgs_reconstruct(const HiggsExpansion& e);

/// Local unitary-gauge configuration: θ, its gradient, A and B′.
struct UnitaryConfig {
  double theta = 0.0;
  Covector dtheta{};
  Covector A{};
  Covector Bprime{};
};

/// η^{μν}Re(conj(D_μ)D_ν) + μ²(v+θ)²/2 − quartic·(v+θ)⁴/4 with
/// D_μ = [∂_μθ + (a_aA_μ + i·a_bB′_μ)(v+θ)]/√2.
double higgs_unitary_density(const UnitaryConfig& config, const CouplingSet& c,
                             const Metric& metric = Metric::mostly_minus());

/// η^{μν}conj(D_μψ)D_νψ + μ²|ψ|² − quartic·|ψ|⁴ with the Abelian matter
/// connection a_aA + i·a_bB.
double higgs_density(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c, const Point& x,
                     const Metric& metric = Metric::mostly_minus());

/// Quadratic coefficients of the unitary-gauge density at the vacuum, each
/// extracted by central second differences.
struct HiggsSpectrum {
  double v = 0.0;
  /// Coefficient m² of ½m²A_μA^μ: ∂²L/∂A_0² / η^{00}.
  double A_mass2 = 0.0;
  /// Coefficient m² of ½m²B′_μB′^μ.
  double Bprime_mass2 = 0.0;
  /// Raw ∂²L/∂θ².
  double theta_curvature = 0.0;
  /// c in L ⊃ −c·θ², i.e. −½∂²L/∂θ².
  double theta_coefficient = 0.0;
  /// k in L ⊃ k·A_μ∂^μθ: ∂²L/∂A_0∂(∂_0θ) / η^{00}.
  double mixing = 0.0;
};

HiggsSpectrum higgs_mass_spectrum(const CouplingSet& c, const Metric& metric = Metric::mostly_minus());

}  // namespace scaleon
