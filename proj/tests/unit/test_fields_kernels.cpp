#include <cmath>
#include <random>

#include "doctest.h"
#include "scaleon/error.hpp"
#include "scaleon/kernels.hpp"
#include "scaleon/random_fields.hpp"
#include "scaleon/real_field.hpp"

using namespace scaleon;

namespace {

FlatGrid square(std::size_t n, double h) { return FlatGrid(GridSpec{2, {n, n, 1, 1}, {h, h, 1, 1}, {}}); }

}  // namespace

TEST_CASE("grid indexing round-trips") {
  const FlatGrid g(GridSpec{3, {4, 5, 6, 1}, {0.5, 0.25, 2.0, 1.0}, {1.0, -1.0, 0.0, 0.0}});
  CHECK(g.size() == 120);
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.index(g.site(i)) == i);
    CHECK(g.site_at(g.point(i)) == g.site(i));
  }
  CHECK(g.point(Site{1, 2, 3, 0})[0] == 1.5);
  CHECK_FALSE(g.contains(Point{10, 0, 0, 0}));
  CHECK_FALSE(g.site_at(Point{1.1, -1, 0, 0}).has_value());
}

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(FlatGrid(GridSpec{0, {1, 1, 1, 1}, {1, 1, 1, 1}, {}}), Error);
  CHECK_THROWS_AS(FlatGrid(GridSpec{2, {3, 0, 1, 1}, {1, 1, 1, 1}, {}}), Error);
  CHECK_THROWS_AS(FlatGrid(GridSpec{2, {3, 3, 1, 1}, {1, -1, 1, 1}, {}}), Error);
  const FlatGrid g = square(5, 1.0);
  const Region r = Region::interior(g, 1);
  CHECK(r.size() == 9);
  CHECK(Region::whole(g).size() == 25);
  CHECK_THROWS_AS(Region::interior(g, 3), Error);
}

TEST_CASE("metrics") {
  const Metric mm = Metric::mostly_minus(), mp = Metric::mostly_plus();
  CHECK(mm(0) == 1.0);
  CHECK(mm(3) == -1.0);
  CHECK(mp(0) == -1.0);
  CHECK(mp(2) == 1.0);
  const std::array<double, 4> v{2, 1, 0, 0};
  CHECK(mm.contract(v, v) == 3.0);
  CHECK(Metric::mostly_minus(2).contract(std::array<double, 4>{1, 1, 5, 5}, std::array<double, 4>{1, 1, 5, 5}) == 0.0);
}

TEST_CASE("grid field stencils are second order") {
  const auto f = AnalyticField::parse("sin(2*x0)*cos(x1) + 0.3*x0*x1^2");
  double prev = 0.0;
  for (std::size_t n : {17u, 33u, 65u}) {
    const double h = 1.0 / static_cast<double>(n - 1);
    const FlatGrid g = square(n, h);
    const auto gf = GridField::sample(g, *f);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point x = g.point(i);
      CHECK(gf->value(x) == f->value(x));
      for (int a = 0; a < 2; ++a) err = std::max(err, std::abs(gf->derivative(x, a) - f->derivative(x, a)));
    }
    if (prev > 0.0) CHECK(prev / err > 3.5);
    prev = err;
  }
}

TEST_CASE("grid second derivatives including mixed") {
  const auto f = AnalyticField::parse("x0^2*x1 + x1^3");
  const FlatGrid g = square(21, 0.05);
  const auto gf = GridField::sample(g, *f);
  const Point x = g.point(Site{10, 10, 0, 0});
  CHECK(gf->second_derivative(x, 0, 0) == doctest::Approx(f->second_derivative(x, 0, 0)).epsilon(1e-9));
  CHECK(gf->second_derivative(x, 0, 1) == doctest::Approx(f->second_derivative(x, 0, 1)).epsilon(1e-9));
  CHECK(gf->second_derivative(x, 1, 1) == doctest::Approx(f->second_derivative(x, 1, 1)).epsilon(1e-9));
  CHECK_THROWS_AS(gf->value(Point{0.01, 0, 0, 0}), Error);
}

TEST_CASE("linear combinations and complex fields") {
  const auto a = AnalyticField::parse("x0"), b = AnalyticField::parse("x1^2");
  const LinearCombinationField lc(1.0, {{2.0, a}, {-1.0, b}});
  const Point x{0.5, 2.0, 0, 0};
  CHECK(lc.value(x) == doctest::Approx(1.0 + 1.0 - 4.0));
  CHECK(lc.derivative(x, 1) == doctest::Approx(-4.0));
  CHECK(lc.is_analytic());

  const ComplexField z = ComplexField::parse("x0", "x1");
  CHECK(z.value(x) == Complex(0.5, 2.0));
  CHECK(z.derivative(x, 1) == Complex(0.0, 1.0));
  const FlatGrid g = square(5, 0.5);
  const ComplexField zs = z.sampled_on(g);
  CHECK_FALSE(zs.is_analytic());
  CHECK(zs.value(Point{1.0, 1.5, 0, 0}) == Complex(1.0, 1.5));
  CHECK(ComplexField::constant(Complex(2, -1)).derivative(x, 0) == Complex(0.0));
}

TEST_CASE("covector fields") {
  const CovectorField P = CovectorField::parse({"x1", "-x0", "0", "0"});
  const Point x{0.3, 0.7, 0, 0};
  CHECK(P.value(x)[0] == doctest::Approx(0.7));
  CHECK(P.derivative(x, 0, 1) == 1.0);
  CHECK(P.derivative(x, 1, 0) == -1.0);
  const CovectorField grad = CovectorField::gradient_of(*AnalyticField::parse("x0^2 + 3*x1^2"));
  CHECK(grad.divergence(x, Metric::mostly_minus(2)) == doctest::Approx(-4.0));
  CHECK(grad.divergence(x, Metric::mostly_plus(2)) == doctest::Approx(4.0));
  const CovectorField sum = CovectorField::combine({{1.0, P}, {2.0, grad}});
  CHECK(sum.value(x)[1] == doctest::Approx(-0.3 + 8.4));
}

TEST_CASE("property: serial and OpenMP kernels are bit-identical") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = AnalyticField::parse(random_sinusoid_sum(rng, 2, 4, 1.0, 5.0));
    const FlatGrid g = square(40 + static_cast<std::size_t>(trial) * 7, 0.03);
    const kernels::RealSiteFunction rf = [&](const Point& x) { return f->value(x); };
    const kernels::ComplexSiteFunction cf = [&](const Point& x) { return Complex(f->value(x), x[0]); };
    CHECK(kernels::serial::sample(g, rf) == kernels::omp::sample(g, rf));
    CHECK(kernels::serial::sample(g, cf) == kernels::omp::sample(g, cf));
    const Region r = Region::interior(g, 2);
    const kernels::ComplexTerm t = [&](std::size_t i) { return Complex(f->value(g.point(i)), 1e-3 * static_cast<double>(i)); };
    const kernels::RealTerm m = [&](std::size_t i) { return f->value(g.point(i)); };
    CHECK(kernels::serial::sum(g, r, t) == kernels::omp::sum(g, r, t));
    CHECK(kernels::serial::max_of(g, r, m) == kernels::omp::max_of(g, r, m));
  }
}

TEST_CASE("sum visits exactly the region") {
  const FlatGrid g = square(9, 1.0);
  const Region r = Region::interior(g, 2);
  const kernels::ComplexTerm one = [](std::size_t) { return Complex(1.0); };
  CHECK(kernels::sum(g, r, one, Execution::serial) == Complex(25.0));
  CHECK(kernels::sum(g, r, one, Execution::parallel) == Complex(25.0));
}
