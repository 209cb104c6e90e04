#include "scaleon/geometry.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "scaleon/expression.hpp"

namespace scaleon {

namespace {

const Metric& eta() {
  static const Metric m = Metric::mostly_plus();
  return m;
}

double dot(const Covector& a, const Vector4& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += a[i] * v[i];
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Second-order derivative of samples f on a non-uniform grid t.
std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    d[i] = -h1 / (h0 * (h0 + h1)) * f[i - 1] + (h1 - h0) / (h0 * h1) * f[i] + h0 / (h1 * (h0 + h1)) * f[i + 1];
  }
  {
    const double h0 = t[1] - t[0];
    const double h1 = t[2] - t[1];
    d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * f[0] + (h0 + h1) / (h0 * h1) * f[1] -
           h0 / (h1 * (h0 + h1)) * f[2];
  }
  {
    const double h1 = t[n - 1] - t[n - 2];
    const double h0 = t[n - 2] - t[n - 3];
    d[n - 1] = (2.0 * h1 + h0) / (h1 * (h0 + h1)) * f[n - 1] - (h0 + h1) / (h0 * h1) * f[n - 2] +
               h1 / (h0 * (h0 + h1)) * f[n - 3];
  }
  return d;
}

double simpson_value(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  double s = 0.0;
  const std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
  for (std::size_t i = 0; i + 2 <= last; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    s += (h0 + h1) / 6.0 *
         ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (n % 2 == 0) {
    // Quadratic through the last three samples integrated over the last interval.
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    const double a = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
    const double b = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
    const double c = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    s += a * f[n - 1] + b * f[n - 2] - c * f[n - 3];
  }
  return s;
}

}  // namespace

GeoScalingField::GeoScalingField(RealFieldPtr alpha) : alpha_(std::move(alpha)) {
  if (!alpha_) fail(ErrorCode::InvalidArgument, "alpha must be set");
}

GeoScalingField GeoScalingField::parse(std::string_view alpha) {
  return GeoScalingField(AnalyticField::parse(alpha));
}

double GeoScalingField::value(const Point& x) const {
  if (!contains(x)) fail(ErrorCode::OutOfDomain, "point outside the domain of alpha");
  return alpha_->value(x);
}

Covector GeoScalingField::gradient(const Point& x) const {
  if (!contains(x)) fail(ErrorCode::OutOfDomain, "point outside the domain of alpha");
  Covector g{};
  for (int mu = 0; mu < 4; ++mu) g[static_cast<std::size_t>(mu)] = alpha_->derivative(x, mu);
  return g;
}

PathSample PathSample::from_expressions(const std::array<std::string, 4>& components, double s0, double s1,
                                        std::size_t n) {
  if (n < 2) fail(ErrorCode::TooFewSamples, "a path needs at least two samples");
  if (!(s1 > s0)) fail(ErrorCode::InvalidArgument, "path parameter range must be increasing");
  const std::vector<std::string> vars{"s"};
  std::array<Expr, 4> p, dp;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    p[mu] = parse_expression(components[mu].empty() ? "0" : components[mu], vars);
    dp[mu] = p[mu].derivative(0);
  }
  PathSample out;
  out.param.resize(n);
  out.points.resize(n);
  out.velocities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = i + 1 == n ? s1 : s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double args[1] = {s};
    out.param[i] = s;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      out.points[i][mu] = p[mu].evaluate(args);
      out.velocities[i][mu] = dp[mu].evaluate(args);
    }
  }
  return out;
}

PathSample PathSample::from_table(std::vector<double> param, std::vector<Point> points) {
  PathSample out;
  out.param = std::move(param);
  out.points = std::move(points);
  out.velocities.assign(out.points.size(), Vector4{});
  if (out.param.size() != out.points.size()) fail(ErrorCode::InvalidArgument, "parameter and point counts differ");
  if (out.param.size() < 3) fail(ErrorCode::TooFewSamples, "a sampled path needs at least three samples");
  out.validate();
  for (std::size_t mu = 0; mu < 4; ++mu) {
    std::vector<double> f(out.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = out.points[i][mu];
    const auto d = differentiate(out.param, f);
    for (std::size_t i = 0; i < f.size(); ++i) out.velocities[i][mu] = d[i];
  }
  return out;
}

PathSample PathSample::read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto parse_error = [&](const std::string& what) {
    fail(ErrorCode::ParseError, "path table line " + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    parse_error("missing header");
  }
  ++line_no;
  if (trim(line) != "tau,p0,p1,p2,p3") parse_error("header must be tau,p0,p1,p2,p3");
  std::vector<double> tau;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::array<double, 5> v{};
    std::size_t k = 0;
    while (std::getline(row, cell, ',')) {
      if (k == 5) parse_error("too many columns");
      const std::string t = trim(cell);
      std::size_t used = 0;
      try {
        v[k] = std::stod(t, &used);
      } catch (const std::exception&) {
        parse_error("not a number: '" + t + "'");
      }
      if (used != t.size()) parse_error("not a number: '" + t + "'");
      ++k;
    }
    if (k != 5) parse_error("expected 5 columns");
    tau.push_back(v[0]);
    pts.push_back({v[1], v[2], v[3], v[4]});
  }
  return from_table(std::move(tau), std::move(pts));
}

void PathSample::validate() const {
  if (points.size() != param.size() || velocities.size() != param.size()) {
    fail(ErrorCode::InvalidArgument, "path sample arrays differ in length");
  }
  for (std::size_t i = 1; i < param.size(); ++i) {
    if (!(param[i] > param[i - 1])) fail(ErrorCode::InvalidArgument, "path parameter must increase strictly");
  }
}

Quadrature simpson(const std::vector<double>& x, const std::vector<double>& f) {
  if (x.size() != f.size()) fail(ErrorCode::InvalidArgument, "quadrature abscissae and values differ in length");
  Quadrature q;
  q.value = simpson_value(x, f);
  if (x.size() >= 5 && x.size() % 2 == 1) {
    std::vector<double> xc, fc;
    for (std::size_t i = 0; i < x.size(); i += 2) {
      xc.push_back(x[i]);
      fc.push_back(f[i]);
    }
    q.error_estimate = std::abs(q.value - simpson_value(xc, fc)) / 15.0;
  }
  return q;
}

Quadrature path_length(const PathSample& p, const GeoScalingField& alpha, const Point& x_ref, CausalKind kind) {
  p.validate();
  const double sign = kind == CausalKind::timelike ? -1.0 : 1.0;
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vector4& v = p.velocities[i];
    double radicand = 0.0;
    double scale = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      const double term = eta()(mu) * v[static_cast<std::size_t>(mu)] * v[static_cast<std::size_t>(mu)];
      radicand += sign * term;
      scale += std::abs(term);
    }
    // Below the rounding floor of the contraction the sign is meaningless.
    if (std::abs(radicand) <= 16.0 * std::numeric_limits<double>::epsilon() * scale) radicand = 0.0;
    if (radicand < 0.0) {
      fail(ErrorCode::WrongCausalKind, "path is not " + std::string(kind == CausalKind::timelike ? "timelike"
                                                                                              : "spacelike") +
                                           " at sample " + std::to_string(i));
    }
    f[i] = std::exp(alpha.value(p.points[i])) * std::sqrt(radicand);
  }
  Quadrature q = simpson(p.param, f);
  const double prefactor = std::exp(-alpha.value(x_ref));
  q.value *= prefactor;
  q.error_estimate *= prefactor;
  return q;
}

Quadrature proper_time(const PathSample& p, const GeoScalingField& alpha, const Point& x_ref, double T) {
  p.validate();
  if (p.size() < 2 || p.param.front() != 0.0 || std::abs(p.param.back() - T) > 1e-12 * std::max(1.0, std::abs(T))) {
    fail(ErrorCode::InvalidArgument, "proper-time path must be parameterized on [0, T]");
  }
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) f[i] = std::exp(alpha.value(p.points[i]));
  Quadrature q = simpson(p.param, f);
  const double prefactor = std::exp(-alpha.value(x_ref));
  q.value *= prefactor;
  q.error_estimate *= prefactor;
  return q;
}

double minkowski_norm(const Vector4& v) { return eta().contract(v, v); }

GeodesicState GeodesicState::timelike(const Point& position, const Vector4& velocity) {
  const double n = minkowski_norm(velocity);
  if (!(n < 0.0)) fail(ErrorCode::WrongCausalKind, "initial velocity is not timelike");
  const double s = 1.0 / std::sqrt(-n);
  GeodesicState st{position, velocity};
  for (double& c : st.velocity) c *= s;
  return st;
}

Vector4 geodesic_rhs(const GeodesicState& state, const GeoScalingField& alpha) {
  const Covector A = alpha.gradient(state.position);
  const double adotv = dot(A, state.velocity);
  Vector4 acc{};
  for (int nu = 0; nu < 4; ++nu) {
    const auto n = static_cast<std::size_t>(nu);
    acc[n] = -(adotv * state.velocity[n] + eta()(nu) * A[n]);
  }
  return acc;
}

DomainExitError::DomainExitError(const std::string& message, GeodesicState last, double tau)
    : Error(ErrorCode::DomainExit, message), last_(last), tau_(tau) {}

GeodesicRun geodesic_integrate(const GeodesicState& initial, const GeoScalingField& alpha, double tau0,
                               double tau1, double step) {
  if (!(step > 0.0)) fail(ErrorCode::StepTooSmall, "integration step must be positive");
  if (!(tau1 > tau0)) fail(ErrorCode::InvalidArgument, "integration span must be increasing");
  if (!alpha.contains(initial.position)) fail(ErrorCode::OutOfDomain, "initial position outside the domain");

  const auto steps = static_cast<std::size_t>(std::ceil((tau1 - tau0) / step - 1e-9));
  const double norm0 = minkowski_norm(initial.velocity);
  GeodesicRun run;
  run.path.param.reserve(steps + 1);
  run.path.param.push_back(tau0);
  run.path.points.push_back(initial.position);
  run.path.velocities.push_back(initial.velocity);

  auto deriv = [&](const GeodesicState& s) { return std::pair{s.velocity, geodesic_rhs(s, alpha)}; };
  auto advance = [](const GeodesicState& s, const std::pair<Vector4, Vector4>& k, double h) {
    GeodesicState out = s;
    for (std::size_t i = 0; i < 4; ++i) {
      out.position[i] += h * k.first[i];
      out.velocity[i] += h * k.second[i];
    }
    return out;
  };

  GeodesicState s = initial;
  double tau = tau0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double h = n + 1 == steps ? tau1 - tau : step;
    try {
      const auto k1 = deriv(s);
      const auto k2 = deriv(advance(s, k1, 0.5 * h));
      const auto k3 = deriv(advance(s, k2, 0.5 * h));
      const auto k4 = deriv(advance(s, k3, h));
      GeodesicState next = s;
      for (std::size_t i = 0; i < 4; ++i) {
        next.position[i] += h / 6.0 * (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
        next.velocity[i] += h / 6.0 * (k1.second[i] + 2.0 * k2.second[i] + 2.0 * k3.second[i] + k4.second[i]);
      }
      bool finite = true;
      for (std::size_t i = 0; i < 4; ++i) finite = finite && std::isfinite(next.position[i]) && std::isfinite(next.velocity[i]);
      if (!finite || !alpha.contains(next.position)) throw Error(ErrorCode::OutOfDomain, "left the domain");
      s = next;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfDomain) throw;
      throw DomainExitError("geodesic left the domain of alpha after tau = " + std::to_string(tau), s, tau);
    }
    tau = n + 1 == steps ? tau1 : tau + h;
    run.path.param.push_back(tau);
    run.path.points.push_back(s.position);
    run.path.velocities.push_back(s.velocity);
    run.normalization_drift = std::max(run.normalization_drift, std::abs(minkowski_norm(s.velocity) - norm0));
  }
  return run;
}

std::vector<Vector4> el_residual(const PathSample& p, const GeoScalingField& alpha) {
  if (p.size() < 5) fail(ErrorCode::TooFewSamples, "residual needs at least five samples");
  p.validate();
  const std::size_t n = p.size();
  const double h = (p.param.back() - p.param.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(p.param[i] - p.param[i - 1] - h) > 1e-9 * h) {
      fail(ErrorCode::InvalidArgument, "residual needs uniformly spaced samples");
    }
  }
  std::vector<Vector4> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector4 v{}, a{};
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const auto f = [&](std::size_t k) { return p.points[k][mu]; };
      if (i == 0) {
        v[mu] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
        a[mu] = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
      } else if (i == n - 1) {
        v[mu] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
        a[mu] = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / (h * h);
      } else {
        v[mu] = (f(i + 1) - f(i - 1)) / (2.0 * h);
        a[mu] = (f(i + 1) - 2.0 * f(i) + f(i - 1)) / (h * h);
      }
    }
    const Vector4 rhs = geodesic_rhs({p.points[i], v}, alpha);
    for (std::size_t mu = 0; mu < 4; ++mu) out[i][mu] = a[mu] - rhs[mu];
  }
  return out;
}

Christoffel christoffel_from_alpha(const GeoScalingField& alpha, const Point& x) {
  const Covector A = alpha.gradient(x);
  Christoffel g{};
  for (std::size_t nu = 0; nu < 4; ++nu) {
    for (std::size_t rho = 0; rho < 4; ++rho) g[nu][rho][nu] = A[rho];
  }
  return g;
}

Vector4 contract(const Christoffel& gamma, const Vector4& v) {
  Vector4 out{};
  for (std::size_t nu = 0; nu < 4; ++nu) {
    for (std::size_t rho = 0; rho < 4; ++rho) {
      for (std::size_t mu = 0; mu < 4; ++mu) out[nu] += gamma[nu][rho][mu] * v[rho] * v[mu];
    }
  }
  return out;
}

}  // namespace scaleon
