#pragma once

#include <array>

#include "scaleon/spacetime.hpp"

namespace scaleon {

using Spinor = std::array<Complex, 4>;
using Mat4 = std::array<std::array<Complex, 4>, 4>;

Mat4 identity4();
Mat4 operator*(const Mat4& a, const Mat4& b);
Mat4 operator+(const Mat4& a, const Mat4& b);
Mat4 operator*(Complex s, const Mat4& a);
Spinor operator*(const Mat4& a, const Spinor& v);
Mat4 adjoint(const Mat4& a);
double max_abs_difference(const Mat4& a, const Mat4& b);

/// Row vector ψ̄ times a matrix, then times a column spinor.
Complex sandwich(const Spinor& bar, const Mat4& m, const Spinor& v);
/// ψ̄ψ-style contraction of a row spinor with a column spinor.
Complex contract(const Spinor& bar, const Spinor& v);

enum class Representation { dirac, chiral };

/// Gamma matrices satisfying {γ^μ, γ^ν} = 2η^{μν}·I for the stored metric.
/// For the mostly-plus metric the matrices are i times the mostly-minus
/// ones, so (γ⁰)² = −I.
class SpinorBasis {
 public:
  static SpinorBasis dirac(const Metric& metric = Metric::mostly_minus());
  static SpinorBasis chiral(const Metric& metric = Metric::mostly_minus());

  const Mat4& gamma(int mu) const { return gamma_[static_cast<std::size_t>(mu)]; }
  const Metric& metric() const noexcept { return metric_; }
  Representation representation() const noexcept { return rep_; }

  /// ψ̄ = ψ†γ⁰.
  Spinor bar(const Spinor& psi) const;

  /// max over μ,ν of |{γ^μ,γ^ν} − 2η^{μν}I|.
  double clifford_defect() const;

 private:
  SpinorBasis(Representation rep, const Metric& metric, std::array<Mat4, 4> gamma);

  Representation rep_;
  Metric metric_;
  std::array<Mat4, 4> gamma_;
};

/// Unitary S with γ_chiral = S·γ_dirac·S† and ψ_chiral = S·ψ_dirac.
Mat4 dirac_to_chiral();

}  // namespace scaleon
