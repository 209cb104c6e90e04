#pragma once

// Path lengths, proper times and geodesics on flat Minkowski space with
// the real scaling factor f = e^α. Geometry uses the mostly-plus metric
// η = diag(−1, 1, 1, 1).

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "scaleon/error.hpp"
#include "scaleon/real_field.hpp"

namespace scaleon {

/// Real scaling exponent α; the geometric scale factor is e^α > 0.
class GeoScalingField {
 public:
  explicit GeoScalingField(RealFieldPtr alpha);
  static GeoScalingField parse(std::string_view alpha);

  double value(const Point& x) const;
  /// A_ρ = ∂α/∂p^ρ.
  Covector gradient(const Point& x) const;
  bool contains(const Point& x) const { return alpha_->contains(x); }
  const RealField& alpha() const noexcept { return *alpha_; }

 private:
  RealFieldPtr alpha_;
};

/// Sampled path: strictly increasing parameter, points and velocities.
struct PathSample {
  std::vector<double> param;
  std::vector<Point> points;
  std::vector<Vector4> velocities;

  std::size_t size() const noexcept { return param.size(); }

  /// n equally spaced samples of p^μ(s), s ∈ [s0, s1], with velocities from
  /// the symbolic derivatives. Expressions use the variable `s`.
  static PathSample from_expressions(const std::array<std::string, 4>& components, double s0, double s1,
                                     std::size_t n);
  /// Velocities by second-order finite differences on the (possibly
  /// non-uniform) parameter.
  static PathSample from_table(std::vector<double> param, std::vector<Point> points);
  /// CSV with the header tau,p0,p1,p2,p3.
  static PathSample read_csv(std::istream& in);

  /// Throws InvalidArgument unless sizes agree and param increases strictly.
  void validate() const;
};

/// Composite Simpson on non-uniform samples (odd interval counts get an
/// exact-for-quadratics correction on the last interval) and a Richardson
/// estimate from the same rule on every second sample.
struct Quadrature {
  double value = 0.0;
  double error_estimate = 0.0;
};
Quadrature simpson(const std::vector<double>& x, const std::vector<double>& f);

enum class CausalKind { timelike, spacelike };

/// e^{−α(x_ref)}·∫ e^{α(p)}·√(∓η_{μν}ṗ^μṗ^ν) dγ, minus sign for timelike.
/// Radicands within rounding of zero count as zero; a radicand of the
/// wrong sign beyond that throws WrongCausalKind.
Quadrature path_length(const PathSample& p, const GeoScalingField& alpha, const Point& x_ref, CausalKind kind);

/// e^{−α(x_ref)}·∫₀^T e^{α(p(τ))} dτ for a path parameterized by proper
/// time on [0, T].
Quadrature proper_time(const PathSample& p, const GeoScalingField& alpha, const Point& x_ref, double T);

struct GeodesicState {
  Point position{};
  Vector4 velocity{};

  /// Rescales a timelike velocity so η(u, u) = −1; WrongCausalKind if u is
  /// not timelike.
  static GeodesicState timelike(const Point& position, const Vector4& velocity);
};

double minkowski_norm(const Vector4& v);

/// −[(A·ṗ)ṗ^ν + η^{νρ}A_ρ] with A = ∇α.
Vector4 geodesic_rhs(const GeodesicState& state, const GeoScalingField& alpha);

class DomainExitError : public Error {
 public:
  DomainExitError(const std::string& message, GeodesicState last, double tau);
  const GeodesicState& last_state() const noexcept { return last_; }
  double last_tau() const noexcept { return tau_; }

 private:
  GeodesicState last_;
  double tau_;
};

struct GeodesicRun {
  PathSample path;
  /// max over samples of |η(ṗ,ṗ) − η(ṗ₀,ṗ₀)|.
  double normalization_drift = 0.0;
};

/// Classical RK4 over [tau0, tau1]; the last step is shortened to land on
/// tau1. Throws DomainExitError when the path leaves the domain of α.
GeodesicRun geodesic_integrate(const GeodesicState& initial, const GeoScalingField& alpha, double tau0,
                               double tau1, double step);

/// p̈ + (A·ṗ)ṗ + η^{·ρ}A_ρ per sample with ṗ, p̈ from second-order
/// differences of the points. Needs ≥ 5 uniformly spaced samples.
std::vector<Vector4> el_residual(const PathSample& p, const GeoScalingField& alpha);

/// Γ[ν][ρ][μ] = δ^ν_μ·∂α/∂p^ρ.
using Christoffel = std::array<std::array<std::array<double, 4>, 4>, 4>;
Christoffel christoffel_from_alpha(const GeoScalingField& alpha, const Point& x);

/// Γ^ν_{ρμ}v^ρv^μ.
Vector4 contract(const Christoffel& gamma, const Vector4& v);

}  // namespace scaleon
