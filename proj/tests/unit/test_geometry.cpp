#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "scaleon/csv.hpp"
#include "scaleon/geometry.hpp"
#include "scaleon/random_fields.hpp"
#include "test_support.hpp"

using namespace scaleon;
using scaleon::test::code_of;

namespace {

std::string num(double v) { return "(" + format_double(v) + ")"; }

GeoScalingField random_alpha(std::mt19937_64& rng, double amplitude = 0.3) {
  return GeoScalingField::parse(random_sinusoid_sum(rng, 4, 4, amplitude, 1.5));
}

}  // namespace

TEST_CASE("simpson on uniform and non-uniform samples") {
  std::vector<double> x, f;
  for (int i = 0; i <= 20; ++i) {
    const double t = std::pow(static_cast<double>(i) / 20.0, 1.5);
    x.push_back(t);
    f.push_back(t * t);
  }
  CHECK(simpson(x, f).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // Even interval count uses the last-interval correction.
  x.pop_back();
  f.pop_back();
  const double end = x.back();
  CHECK(simpson(x, f).value == doctest::Approx(end * end * end / 3.0).epsilon(1e-13));

  std::vector<double> u, g;
  for (int i = 0; i <= 64; ++i) {
    u.push_back(i / 64.0);
    g.push_back(std::exp(u.back()));
  }
  const Quadrature q = simpson(u, g);
  const double err = std::abs(q.value - (std::exp(1.0) - 1.0));
  CHECK(err < 1e-9);
  CHECK(q.error_estimate >= 0.0);
  CHECK(q.error_estimate < 1e-8);
  CHECK(code_of([] { (void)simpson({0.0, 1.0}, {1.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("path length examples") {
  const double T = 2.5;
  const auto straight = PathSample::from_expressions({"s", "0", "0", "0"}, 0.0, T, 101);
  CHECK(path_length(straight, GeoScalingField::parse("0"), Point{}, CausalKind::timelike).value ==
        doctest::Approx(T).epsilon(1e-14));
  const double c = 0.4, xr = -0.3;
  const GeoScalingField shifted = GeoScalingField::parse(num(c) + " + " + num(xr - c) + "*x3");
  // α(path) = c on x3 = 0; α(x_ref) = xr at x3 = 1.
  const Point x_ref{0, 0, 0, 1};
  CHECK(path_length(straight, shifted, x_ref, CausalKind::timelike).value ==
        doctest::Approx(std::exp(c - xr) * T).epsilon(1e-12));

  const auto space = PathSample::from_expressions({"0", "s", "2*s", "0"}, 0.0, 1.0, 11);
  CHECK(path_length(space, GeoScalingField::parse("0"), Point{}, CausalKind::spacelike).value ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(code_of([&] { (void)path_length(space, GeoScalingField::parse("0"), Point{}, CausalKind::timelike); }) ==
        ErrorCode::WrongCausalKind);
}

TEST_CASE("property: null paths have zero length for any alpha") {
  std::mt19937_64 rng(50);
  for (int i = 0; i < 50; ++i) {
    const GeoScalingField alpha = random_alpha(rng, 1.0);
    // Unit spatial direction, so η(ṗ, ṗ) = 0.
    double vx = uniform(rng, -1, 1), vy = uniform(rng, -1, 1), vz = uniform(rng, -1, 1);
    const double len = std::sqrt(vx * vx + vy * vy + vz * vz);
    vx /= len;
    vy /= len;
    vz /= len;
    const auto null = PathSample::from_expressions({"s", num(vx) + "*s", num(vy) + "*s", num(vz) + "*s"}, 0.0, 1.0, 65);
    for (CausalKind kind : {CausalKind::timelike, CausalKind::spacelike}) {
      CHECK(std::abs(path_length(null, alpha, Point{}, kind).value) < 1e-10);
    }
  }
}

TEST_CASE("property: reference-point covariance") {
  std::mt19937_64 rng(51);
  const auto path = PathSample::from_expressions({"s", "0.3*sin(s)", "0.1*s^2", "0"}, 0.0, 1.0, 41);
  for (int i = 0; i < 20; ++i) {
    const GeoScalingField alpha = random_alpha(rng);
    const Point x{uniform(rng, -1, 1), uniform(rng, -1, 1), 0, 0};
    const Point z{uniform(rng, -1, 1), 0, uniform(rng, -1, 1), 0};
    const double lx = path_length(path, alpha, x, CausalKind::timelike).value;
    const double lz = path_length(path, alpha, z, CausalKind::timelike).value;
    CHECK(lz == doctest::Approx(std::exp(alpha.value(x) - alpha.value(z)) * lx).epsilon(1e-14));
  }
}

TEST_CASE("proper time closed forms") {
  const double T = 1.5;
  const auto path = PathSample::from_expressions({"s", "0", "0", "0"}, 0.0, T, 201);
  CHECK(proper_time(path, GeoScalingField::parse("0"), Point{}, T).value == doctest::Approx(T).epsilon(1e-14));
  const Point x_ref{0, 0.5, 0, 0};
  CHECK(proper_time(path, GeoScalingField::parse("0.7 + 0.2*x1"), x_ref, T).value ==
        doctest::Approx(std::exp(0.7 - 0.8) * T).epsilon(1e-12));
  const double k = 0.9;
  const double expected = std::exp(-k * 0.0) * (std::exp(k * T) - 1.0) / k;
  CHECK(std::abs(proper_time(path, GeoScalingField::parse(num(k) + "*x0"), Point{}, T).value - expected) < 1e-8);
  CHECK(code_of([&] { (void)proper_time(path, GeoScalingField::parse("0"), Point{}, 2.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("geodesic right-hand side") {
  const GeoScalingField flat = GeoScalingField::parse("3");
  const Vector4 zero = geodesic_rhs({Point{}, Vector4{1, 0.2, 0, 0}}, flat);
  for (double v : zero) CHECK(v == 0.0);

  const double a = 0.7, v = 0.4;
  const GeoScalingField lin = GeoScalingField::parse(num(a) + "*x1");
  const Vector4 r1 = geodesic_rhs({Point{}, Vector4{1, 0, 0, 0}}, lin);
  CHECK(r1[0] == 0.0);
  CHECK(r1[1] == doctest::Approx(-a));
  const Vector4 r2 = geodesic_rhs({Point{}, Vector4{1, v, 0, 0}}, lin);
  CHECK(r2[0] == doctest::Approx(-a * v * 1.0));
  CHECK(r2[1] == doctest::Approx(-(a * v * v + a)));
  CHECK(r2[2] == 0.0);
}

TEST_CASE("timelike initial state") {
  const GeodesicState s = GeodesicState::timelike(Point{}, Vector4{2.0, 1.0, 0.0, 0.0});
  CHECK(minkowski_norm(s.velocity) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(code_of([] { (void)GeodesicState::timelike(Point{}, Vector4{1.0, 1.0, 0.0, 0.0}); }) == ErrorCode::WrongCausalKind);
}

TEST_CASE("geodesic integration") {
  const GeodesicState s0 = GeodesicState::timelike(Point{0.1, 0.2, 0, 0}, Vector4{1.0, 0.3, -0.2, 0.1});
  const GeodesicRun straight = geodesic_integrate(s0, GeoScalingField::parse("0.5"), 0.0, 2.0, 0.03);
  CHECK(straight.path.param.back() == 2.0);
  for (std::size_t i = 0; i < straight.path.size(); ++i) {
    for (std::size_t mu = 0; mu < 4; ++mu) {
      CHECK(std::abs(straight.path.points[i][mu] - (s0.position[mu] + s0.velocity[mu] * straight.path.param[i])) < 1e-12);
    }
  }

  // Fourth order: endpoint differences shrink by 16 per halving.
  const GeoScalingField alpha = GeoScalingField::parse("0.3*sin(x1) + 0.2*x0*x2");
  const auto end = [&](double h) { return geodesic_integrate(s0, alpha, 0.0, 1.0, h).path.points.back(); };
  const Point a = end(0.05), b = end(0.025), c = end(0.0125);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    e1 = std::max(e1, std::abs(a[mu] - b[mu]));
    e2 = std::max(e2, std::abs(b[mu] - c[mu]));
  }
  CHECK(std::log2(e1 / e2) >= 3.8);
  CHECK(geodesic_integrate(s0, alpha, 0.0, 1.0, 0.01).normalization_drift < 1e-9);
  CHECK(code_of([&] { (void)geodesic_integrate(s0, alpha, 0.0, 1.0, 0.0); }) == ErrorCode::StepTooSmall);
}

TEST_CASE("domain exit keeps the last state") {
  // α = 0.1·x1 defined only for x0 < 1.
  class Bounded final : public RealField {
   public:
    double value(const Point& x) const override { return inner_->value(x); }
    double derivative(const Point& x, int a) const override { return inner_->derivative(x, a); }
    double second_derivative(const Point& x, int a, int b) const override { return inner_->second_derivative(x, a, b); }
    RealFieldPtr derivative_field(int a) const override { return inner_->derivative_field(a); }
    bool contains(const Point& x) const override { return x[0] < 1.0; }
    bool is_analytic() const override { return true; }

   private:
    RealFieldPtr inner_ = AnalyticField::parse("0.1*x1");
  };
  const GeoScalingField alpha(std::make_shared<Bounded>());
  const GeodesicState s0 = GeodesicState::timelike(Point{0.1, 0.5, 0, 0}, Vector4{1.0, 0.0, 0.0, 0.0});
  try {
    (void)geodesic_integrate(s0, alpha, 0.0, 5.0, 0.1);
    FAIL("expected DomainExit");
  } catch (const DomainExitError& e) {
    CHECK(e.code() == ErrorCode::DomainExit);
    CHECK(e.last_tau() > 0.5);
    CHECK(e.last_tau() < 1.0);
    CHECK(alpha.contains(e.last_state().position));
  }
}

TEST_CASE("Euler-Lagrange residual") {
  const auto line = PathSample::from_expressions({"s", "0", "0", "0"}, 0.0, 1.0, 21);
  for (const Vector4& r : el_residual(line, GeoScalingField::parse("0")))
    for (double v : r) CHECK(std::abs(v) < 1e-12);
  const double k = 0.45;
  for (const Vector4& r : el_residual(line, GeoScalingField::parse(num(k) + "*x1"))) {
    CHECK(r[1] == doctest::Approx(k).epsilon(1e-12));
    CHECK(std::abs(r[0]) < 1e-12);
  }
  const auto short_path = PathSample::from_expressions({"s", "0", "0", "0"}, 0.0, 1.0, 4);
  CHECK(code_of([&] { (void)el_residual(short_path, GeoScalingField::parse("0")); }) == ErrorCode::TooFewSamples);

  // Integrated geodesic: residual falls at the stencil order.
  const GeoScalingField alpha = GeoScalingField::parse("0.2*cos(x1) + 0.1*x0");
  const GeodesicState s0 = GeodesicState::timelike(Point{}, Vector4{1.0, 0.4, 0.0, 0.0});
  const auto worst = [&](double h) {
    double w = 0.0;
    for (const Vector4& r : el_residual(geodesic_integrate(s0, alpha, 0.0, 1.0, h).path, alpha))
      for (double v : r) w = std::max(w, std::abs(v));
    return w;
  };
  CHECK(worst(0.02) / worst(0.01) > 3.5);
}

TEST_CASE("stationarity of integrated geodesics") {
  std::mt19937_64 rng(70);
  const GeoScalingField alpha = GeoScalingField::parse("0.3*sin(x1) + 0.2*x0");
  const GeodesicState s0 = GeodesicState::timelike(Point{}, Vector4{1.0, 0.2, 0.1, 0.0});
  const PathSample g = geodesic_integrate(s0, alpha, 0.0, 1.0, 0.005).path;
  const double base = path_length(g, alpha, Point{}, CausalKind::timelike).value;
  // Independent perturbation: sin² bump with analytic velocity correction.
  const auto delta = [&](const Vector4& dir, double eps) {
    PathSample p = g;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double s = std::numbers::pi * g.param[i];
      for (std::size_t mu = 0; mu < 4; ++mu) {
        p.points[i][mu] += eps * std::sin(s) * std::sin(s) * dir[mu];
        p.velocities[i][mu] += eps * std::numbers::pi * std::sin(2 * s) * dir[mu];
      }
    }
    return path_length(p, alpha, Point{}, CausalKind::timelike).value - base;
  };
  for (int i = 0; i < 20; ++i) {
    Vector4 dir{};
    for (double& d : dir) d = uniform(rng, -1, 1);
    const double d1 = delta(dir, 0.01), d2 = delta(dir, 0.005);
    CHECK(std::abs(d2) <= 0.3 * std::abs(d1) + 1e-11);
    CHECK(std::abs(d1) <= 10.0 * 0.01 * 0.01);
  }
  // A non-geodesic path is not stationary: halving ε only halves ΔL.
  const PathSample wrong = PathSample::from_expressions({"s", "0.2*s", "0.1*s", "0"}, 0.0, 1.0, 201);
  const double wbase = path_length(wrong, alpha, Point{}, CausalKind::timelike).value;
  PathSample bumped = wrong;
  for (std::size_t i = 0; i < bumped.size(); ++i) {
    const double s = std::numbers::pi * wrong.param[i];
    bumped.points[i][1] += 0.01 * std::sin(s) * std::sin(s);
    bumped.velocities[i][1] += 0.01 * std::numbers::pi * std::sin(2 * s);
  }
  CHECK(std::abs(path_length(bumped, alpha, Point{}, CausalKind::timelike).value - wbase) > 1e-4);
}

TEST_CASE("christoffel symbols") {
  const Christoffel zero = christoffel_from_alpha(GeoScalingField::parse("2"), Point{});
  for (const auto& a : zero)
    for (const auto& b : a)
      for (double v : b) CHECK(v == 0.0);
  const double k = 0.6;
  const Christoffel lin = christoffel_from_alpha(GeoScalingField::parse(num(k) + "*x1"), Point{});
  CHECK(lin[0][1][0] == k);
  CHECK(lin[1][1][1] == k);
  CHECK(lin[0][1][1] == 0.0);

  std::mt19937_64 rng(80);
  const GeoScalingField alpha = random_alpha(rng);
  for (int i = 0; i < 20; ++i) {
    const Point x{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), 0};
    Vector4 v{};
    for (double& c : v) c = uniform(rng, -2, 2);
    const Covector A = alpha.gradient(x);
    double Av = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) Av += A[mu] * v[mu];
    const Vector4 got = contract(christoffel_from_alpha(alpha, x), v);
    for (std::size_t nu = 0; nu < 4; ++nu) CHECK(got[nu] == doctest::Approx(Av * v[nu]).epsilon(1e-13));
  }
}

TEST_CASE("path tables") {
  std::istringstream ok("tau,p0,p1,p2,p3\n0,0,0,0,0\n0.5,0.5,0.1,0,0\n1,1,0.2,0,0\n1.5,1.5,0.3,0,0\n");
  const PathSample p = PathSample::read_csv(ok);
  CHECK(p.size() == 4);
  CHECK(p.velocities[1][1] == doctest::Approx(0.2));

  std::istringstream bad_header("t,p0,p1,p2,p3\n0,0,0,0,0\n");
  CHECK(code_of([&] { (void)PathSample::read_csv(bad_header); }) == ErrorCode::ParseError);
  std::istringstream bad_row("tau,p0,p1,p2,p3\n0,0,0,0,0\n1,x,0,0,0\n");
  try {
    (void)PathSample::read_csv(bad_row);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([] { (void)PathSample::from_table({0.0, 1.0, 1.0}, {Point{}, Point{}, Point{}}); }) ==
        ErrorCode::InvalidArgument);

  // Non-uniform table velocities are second-order accurate.
  std::vector<double> tau;
  std::vector<Point> pts;
  for (int i = 0; i <= 40; ++i) {
    const double t = std::pow(i / 40.0, 1.3);
    tau.push_back(t);
    pts.push_back(Point{t, std::sin(t), 0, 0});
  }
  const PathSample nu = PathSample::from_table(tau, pts);
  for (std::size_t i = 0; i < nu.size(); ++i) CHECK(std::abs(nu.velocities[i][1] - std::cos(tau[i])) < 2e-3);
}
