#include "scaleon/higgs.hpp"

#include <cmath>
#include <functional>

#include "scaleon/error.hpp"

namespace scaleon {

namespace {

constexpr Complex I{0.0, 1.0};

// Central second difference with one Richardson step; exact for quadratics
// up to rounding and O(h⁴) otherwise.
double second_difference(const std::function<double(double)>& f, double h) {
  const auto d2 = [&](double s) { return (f(s) - 2.0 * f(0.0) + f(-s)) / (s * s); };
  const double coarse = d2(h);
  const double fine = d2(0.5 * h);
  return fine + (fine - coarse) / 3.0;
}

double mixed_difference(const std::function<double(double, double)>& f, double h) {
  return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
}

}  // namespace

double higgs_vacuum(const CouplingSet& c) {
  if (!(c.mu > 0.0) || !(c.quartic > 0.0)) {
    fail(ErrorCode::ConfigError, "Higgs potential needs mu > 0 and quartic > 0");
  }
  return c.mu / std::sqrt(c.quartic);
}

HiggsExpansion higgs_unitary_gauge(const MatterField& psi, const GaugeBackground& bg, double v, double a_b,
                                   const Point& x) {
  psi.require(FieldKind::scalar);
  if (!(v > 0.0)) fail(ErrorCode::InvalidArgument, "vacuum value must be positive");
  if (a_b == 0.0) fail(ErrorCode::DivisionByZero, "unitary gauge needs a_b != 0");
  if (!psi.contains(x) || !bg.B.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the field domain");
  const Complex p = psi.value(x)[0];
  if (p == Complex{}) fail(ErrorCode::ZeroField, "phase undefined where the field vanishes");
  HiggsExpansion e;
  e.v = v;
  e.theta = std::sqrt(2.0) * std::abs(p) - v;
  e.phi = v * std::arg(p);
  const Covector B = bg.B.value(x);
  for (int mu = 0; mu < 4; ++mu) {
    // ∂φ = v·Im(∂ψ/ψ), so ∂φ/(a_b·v) = Im(∂ψ/ψ)/a_b.
    const Complex log_derivative = psi.derivative(x, mu)[0] / p;
    e.Bprime[static_cast<std::size_t>(mu)] = B[static_cast<std::size_t>(mu)] + log_derivative.imag() / a_b;
  }
  return e;
}

Complex higgs_reconstruct(const HiggsExpansion& e) {
  return (e.v + e.theta) / std::sqrt(2.0) * std::exp(I * (e.phi / e.v));
}

double higgs_unitary_density(const UnitaryConfig& config, const CouplingSet& c, const Metric& metric) {
  const double v = higgs_vacuum(c);
  const double r = v + config.theta;
  double kinetic = 0.0;
  for (int mu = 0; mu < metric.dim(); ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    const Complex D = (config.dtheta[m] + Complex(c.a_a * config.A[m], c.a_b * config.Bprime[m]) * r) /
                      std::sqrt(2.0);
    kinetic += metric(mu) * std::norm(D);
  }
  const double r2 = r * r;
  return kinetic + c.mu * c.mu * r2 / 2.0 - c.quartic * r2 * r2 / 4.0;
}

double higgs_density(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c, const Point& x,
                     const Metric& metric) {
  psi.require(FieldKind::scalar);
  double kinetic = 0.0;
  for (int mu = 0; mu < metric.dim(); ++mu) {
    const Complex D = scalar_covariant_derivative(psi, bg, c, x, mu);
    kinetic += metric(mu) * std::norm(D);
  }
  const double n = std::norm(psi.value(x)[0]);
  return kinetic + c.mu * c.mu * n - c.quartic * n * n;
}

HiggsSpectrum higgs_mass_spectrum(const CouplingSet& c, const Metric& metric) {
  HiggsSpectrum s;
  s.v = higgs_vacuum(c);
  const double eta00 = metric(0);
  const double h = 1e-2 * std::max(1.0, s.v);
  const UnitaryConfig vacuum{};

  s.A_mass2 = second_difference(
                  [&](double a) {
                    UnitaryConfig k = vacuum;
                    k.A[0] = a;
                    return higgs_unitary_density(k, c, metric);
                  },
                  h) /
              eta00;
  s.Bprime_mass2 = second_difference(
                       [&](double b) {
                         UnitaryConfig k = vacuum;
                         k.Bprime[0] = b;
                         return higgs_unitary_density(k, c, metric);
                       },
                       h) /
                   eta00;
  s.theta_curvature = second_difference(
      [&](double t) {
        UnitaryConfig k = vacuum;
        k.theta = t;
        return higgs_unitary_density(k, c, metric);
      },
      h);
  s.theta_coefficient = -0.5 * s.theta_curvature;
  s.mixing = mixed_difference(
                 [&](double a, double dt) {
                   UnitaryConfig k = vacuum;
                   k.A[0] = a;
                   k.dtheta[0] = dt;
                   return higgs_unitary_density(k, c, metric);
                 },
                 h) /
             eta00;
  return s;
}

}  // namespace scaleon
