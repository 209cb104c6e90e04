#include "scaleon/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "scaleon/error.hpp"

namespace scaleon {

namespace {

constexpr Complex I{0.0, 1.0};

std::size_t u(int mu) { return static_cast<std::size_t>(mu); }

void require_point(const MatterField& psi, const GaugeBackground& bg, const Point& x) {
  if (!psi.contains(x) || !bg.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the field domain");
}

void require_mostly_minus(const SpinorBasis& basis) {
  if (!(basis.metric() == Metric::mostly_minus())) {
    fail(ErrorCode::InvalidArgument, "Dirac densities need a mostly-minus spinor basis");
  }
}

// κ_μ = a_aA_μ + i·a_bB_μ.
ComplexCovector matter_connection(const GaugeBackground& bg, const CouplingSet& c, const Point& x) {
  const Covector A = bg.A.value(x);
  const Covector B = bg.B.value(x);
  ComplexCovector k{};
  for (std::size_t mu = 0; mu < 4; ++mu) k[mu] = Complex(c.a_a * A[mu], c.a_b * B[mu]);
  return k;
}

std::array<Spinor, 4> spinor_derivatives(const MatterField& psi, const Point& x) {
  std::array<Spinor, 4> d{};
  for (int mu = 0; mu < 4; ++mu) {
    const Multiplet m = psi.derivative(x, mu);
    for (std::size_t i = 0; i < 4; ++i) d[u(mu)][i] = m[i];
  }
  return d;
}

// Row spinor r times matrix m.
Spinor row_times(const Spinor& r, const Mat4& m) {
  Spinor out{};
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 4; ++i) out[j] += r[i] * m[i][j];
  }
  return out;
}

std::string coefficient_term(double coefficient, const char* symbol) {
  if (coefficient == 1.0) return symbol;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g %s", coefficient, symbol);
  return buf;
}

}  // namespace

Complex LagrangianSample::breakdown_sum() const {
  Complex s{};
  for (const auto& t : breakdown) s += t.second;
  return s;
}

Complex LagrangianSample::term(const std::string& name) const {
  for (const auto& t : breakdown) {
    if (t.first == name) return t.second;
  }
  return {};
}

LagrangianSample kg_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                               const Point& x, const Metric& metric) {
  psi.require(FieldKind::scalar);
  require_point(psi, bg, x);
  const Complex v = psi.value(x)[0];
  const double norm2 = std::norm(v);
  const Covector A = bg.A.value(x);
  const Covector B = bg.B.value(x);

  Complex direct{};
  Complex kinetic{}, a_coupling{}, b_coupling{};
  double shift = 0.0;
  for (int mu = 0; mu < metric.dim(); ++mu) {
    const double eta = metric(mu);
    const Complex d = psi.derivative(x, mu)[0];
    const Complex D = scalar_covariant_derivative(psi, bg, c, x, mu);
    direct += eta * D * std::conj(D);
    kinetic += eta * d * std::conj(d);
    // ∂(ψψ*) = ψ*∂ψ + ψ∂ψ*.
    a_coupling += eta * c.a_a * A[u(mu)] * 2.0 * std::real(std::conj(v) * d);
    b_coupling += eta * I * c.a_b * B[u(mu)] * (v * std::conj(d) - std::conj(v) * d);
    shift += eta * (c.a_a * c.a_a * A[u(mu)] * A[u(mu)] + c.a_b * c.a_b * B[u(mu)] * B[u(mu)]);
  }
  const double mass = -c.m * c.m * norm2;
  direct += mass;

  LagrangianSample s;
  s.site = x;
  s.density = direct;
  s.breakdown = {{"kinetic", kinetic},
                 {"A-coupling", a_coupling},
                 {"B-coupling", b_coupling},
                 {"mass-shift", shift * norm2},
                 {"mass", mass}};
  return s;
}

Complex kg_density(const MatterField& psi, const MatterField& chi, const GaugeBackground& bg,
                   const CouplingSet& c, const Point& x, const Metric& metric) {
  psi.require(FieldKind::scalar);
  chi.require(FieldKind::scalar);
  require_point(psi, bg, x);
  if (!chi.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the field domain");
  const Complex p = psi.value(x)[0];
  const Complex q = chi.value(x)[0];
  const ComplexCovector k = matter_connection(bg, c, x);
  Complex density = -c.m * c.m * q * p;
  for (int mu = 0; mu < metric.dim(); ++mu) {
    const Complex dp = psi.derivative(x, mu)[0] + k[u(mu)] * p;
    const Complex dq = chi.derivative(x, mu)[0] + std::conj(k[u(mu)]) * q;
    density += metric(mu) * dp * dq;
  }
  return density;
}

std::vector<double> quadrature_weights(std::size_t n, double h) {
  if (n == 0) return {};
  if (n == 1) return {1.0};
  std::vector<double> w(n, h);
  if (n % 2 == 1) {
    for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1 ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)) * h / 3.0;
  } else {
    w.front() = w.back() = 0.5 * h;
  }
  return w;
}

Complex scaled_action(const FlatGrid& grid, const Region& region, const DensityFunction& density,
                      const ScalingField& scaling, const Point& x_ref, Execution exec) {
  for (int a = 0; a < 4; ++a) {
    const auto limit = a < grid.dim() ? grid.extent(a) : std::size_t{1};
    if (region.lo[u(a)] > region.hi[u(a)] || region.hi[u(a)] >= limit) {
      fail(ErrorCode::OutOfDomain, "action region outside the grid");
    }
  }
  const Complex prefactor = std::exp(-eval_lambda(scaling, x_ref));
  std::array<std::vector<double>, 4> weights;
  for (int a = 0; a < 4; ++a) {
    weights[u(a)] = a < grid.dim() ? quadrature_weights(region.extent(a), grid.spacing(a))
                                   : std::vector<double>{1.0};
  }
  const auto term = [&](std::size_t idx) {
    const Site s = grid.site(idx);
    const Point y = grid.point(s);
    double w = 1.0;
    for (std::size_t a = 0; a < 4; ++a) w *= weights[a][s[a] - region.lo[a]];
    return w * std::exp(eval_lambda(scaling, y)) * density(y);
  };
  return prefactor * kernels::sum(grid, region, term, exec);
}

Complex kg_eom_residual(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                        const ScalingField& scaling, const Point& x, const Metric& metric) {
  psi.require(FieldKind::scalar);
  require_point(psi, bg, x);
  const Complex p = psi.value(x)[0];
  const Covector A = bg.A.value(x);
  const Covector B = bg.B.value(x);
  const ComplexCovector k = matter_connection(bg, c, x);
  const GradientFields lambda = grad_fields(scaling, x);

  Complex box{}, b_drift{}, lambda_line{};
  double shift = 0.0;
  for (int mu = 0; mu < metric.dim(); ++mu) {
    const double eta = metric(mu);
    const Complex d = psi.derivative(x, mu)[0];
    box += eta * psi.second_derivative(x, mu, mu)[0];
    b_drift += eta * B[u(mu)] * d;
    shift += eta * (c.a_a * c.a_a * A[u(mu)] * A[u(mu)] + c.a_b * c.a_b * B[u(mu)] * B[u(mu)]);
    const Complex dlambda(lambda.A[u(mu)], lambda.B[u(mu)]);
    lambda_line += eta * dlambda * (d + k[u(mu)] * p);
  }
  const Complex divergence(c.a_a * bg.A.divergence(x, metric), c.a_b * bg.B.divergence(x, metric));
  return box + divergence * p + 2.0 * I * c.a_b * b_drift + (c.m * c.m - shift) * p + lambda_line;
}

Spinor spinor_value(const MatterField& psi, const Point& x) {
  psi.require(FieldKind::spinor);
  const Multiplet m = psi.value(x);
  return {m[0], m[1], m[2], m[3]};
}

LagrangianSample dirac_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                  const Point& x, const SpinorBasis& basis) {
  psi.require(FieldKind::spinor);
  require_mostly_minus(basis);
  require_point(psi, bg, x);
  const Spinor v = spinor_value(psi, x);
  const Spinor bar = basis.bar(v);
  const auto d = spinor_derivatives(psi, x);
  const Covector A = bg.A.value(x);
  const Covector B = bg.B.value(x);

  Complex kinetic{}, a_coupling{}, b_coupling{};
  for (int mu = 0; mu < 4; ++mu) {
    const Mat4& g = basis.gamma(mu);
    kinetic += I * sandwich(bar, g, d[u(mu)]);
    const Complex gv = I * sandwich(bar, g, v);
    a_coupling += gv * c.a_a * A[u(mu)];
    b_coupling += gv * I * c.a_b * B[u(mu)];
  }
  const Complex mass = -c.m * contract(bar, v);

  LagrangianSample s;
  s.site = x;
  s.breakdown = {{"kinetic", kinetic}, {"A-coupling", a_coupling}, {"B-coupling", b_coupling}, {"mass", mass}};
  s.density = s.breakdown_sum();
  return s;
}

std::string DiracEquationForm::to_string() const {
  std::string connection;
  if (A_coefficient != 0.0) connection += " + " + coefficient_term(A_coefficient, "A_mu");
  if (B_coefficient != 0.0) connection += " + i " + coefficient_term(B_coefficient, "B_mu");
  if (variant == DiracVariant::psi_eq) {
    const std::string derivative = connection.empty() ? "d_mu" : "(d_mu" + connection + ")";
    return "(i gamma^mu " + derivative + (mass_sign < 0 ? " - m" : " + m") + ") psi = 0";
  }
  const std::string derivative = connection.empty() ? "d_mu" : "(d_mu" + connection + ")";
  return derivative + " psibar i gamma^mu" + (mass_sign < 0 ? " - m" : " + m") + " psibar = 0";
}

DiracEquationForm dirac_equation_form(const CouplingSet& c, DiracVariant variant) {
  if (variant == DiracVariant::psi_eq) return {variant, c.a_a, c.a_b, -1};
  // ∂_μ(e^{λ}ψ̄) = e^{λ}(∂_μ + ∂_μλ)ψ̄ and ∂_μλ = A_μ + iB_μ with unit weight.
  constexpr double weight = 1.0;
  return {variant, weight - c.a_a, weight - c.a_b, +1};
}

Spinor dirac_eom_residual(const MatterField& psi, const MatterField& psibar, const GaugeBackground& bg,
                          const CouplingSet& c, const ScalingField& scaling, DiracVariant variant,
                          const Point& x, const SpinorBasis& basis) {
  psi.require(FieldKind::spinor);
  psibar.require(FieldKind::spinor);
  require_mostly_minus(basis);
  const ComplexCovector k = matter_connection(bg, c, x);
  Spinor out{};
  if (variant == DiracVariant::psi_eq) {
    require_point(psi, bg, x);
    const Spinor v = spinor_value(psi, x);
    const auto d = spinor_derivatives(psi, x);
    for (int mu = 0; mu < 4; ++mu) {
      Spinor Dv{};
      for (std::size_t i = 0; i < 4; ++i) Dv[i] = d[u(mu)][i] + k[u(mu)] * v[i];
      const Spinor g = basis.gamma(mu) * Dv;
      for (std::size_t i = 0; i < 4; ++i) out[i] += I * g[i];
    }
    for (std::size_t i = 0; i < 4; ++i) out[i] -= c.m * v[i];
    return out;
  }
  require_point(psibar, bg, x);
  const Spinor r = spinor_value(psibar, x);
  const auto d = spinor_derivatives(psibar, x);
  const GradientFields lambda = grad_fields(scaling, x);
  for (int mu = 0; mu < 4; ++mu) {
    const Complex shift = Complex(lambda.A[u(mu)], lambda.B[u(mu)]) - k[u(mu)];
    Spinor row{};
    for (std::size_t i = 0; i < 4; ++i) row[i] = d[u(mu)][i] + shift * r[i];
    const Spinor g = row_times(row, basis.gamma(mu));
    for (std::size_t i = 0; i < 4; ++i) out[i] += I * g[i];
  }
  for (std::size_t i = 0; i < 4; ++i) out[i] += c.m * r[i];
  return out;
}

FieldStrength field_strength(const CovectorField& P, const Point& x) {
  if (!P.contains(x)) fail(ErrorCode::OutOfDomain, "point outside the photon field domain");
  FieldStrength G{};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      // derivative(x, a, b) is ∂_b P_a.
      const double g = P.derivative(x, nu, mu) - P.derivative(x, mu, nu);
      G[u(mu)][u(nu)] = g;
      G[u(nu)][u(mu)] = -g;
    }
  }
  return G;
}

LagrangianSample qed_lagrangian(const MatterField& psi, const GaugeBackground& bg, const CouplingSet& c,
                                const Point& x, const SpinorBasis& basis) {
  LagrangianSample s = dirac_lagrangian(psi, bg, c, x, basis);
  const Spinor v = spinor_value(psi, x);
  const Spinor bar = basis.bar(v);
  const Covector P = bg.P.value(x);
  Complex p_coupling{};
  for (int mu = 0; mu < 4; ++mu) p_coupling += I * sandwich(bar, basis.gamma(mu), v) * I * c.a_p * P[u(mu)];
  const FieldStrength G = field_strength(bg.P, x);
  const Metric& eta = basis.metric();
  double gg = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) gg += eta(mu) * eta(nu) * G[u(mu)][u(nu)] * G[u(mu)][u(nu)];
  }
  s.breakdown.emplace_back("P-coupling", p_coupling);
  s.breakdown.emplace_back("Yang-Mills", Complex(-0.25 * gg, 0.0));
  s.density = s.breakdown_sum();
  return s;
}

}  // namespace scaleon
