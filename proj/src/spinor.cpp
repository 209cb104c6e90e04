#include "scaleon/spinor.hpp"

#include <cmath>

#include "scaleon/error.hpp"

namespace scaleon {

namespace {

constexpr Complex I{0.0, 1.0};

// Block matrix [[a, b], [c, d]] from 2×2 blocks.
using Mat2 = std::array<std::array<Complex, 2>, 2>;

Mat4 blocks(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
  Mat4 m{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      m[i][j] = a[i][j];
      m[i][j + 2] = b[i][j];
      m[i + 2][j] = c[i][j];
      m[i + 2][j + 2] = d[i][j];
    }
  }
  return m;
}

Mat2 scaled(Complex s, const Mat2& a) {
  Mat2 r{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) r[i][j] = s * a[i][j];
  }
  return r;
}

const Mat2 kZero2{};
const Mat2 kId2{{{1.0, 0.0}, {0.0, 1.0}}};
const std::array<Mat2, 3> kPauli{{
    {{{0.0, 1.0}, {1.0, 0.0}}},
    {{{0.0, -I}, {I, 0.0}}},
    {{{1.0, 0.0}, {0.0, -1.0}}},
}};

std::array<Mat4, 4> standard_gammas(Representation rep) {
  std::array<Mat4, 4> g;
  g[0] = rep == Representation::dirac ? blocks(kId2, kZero2, kZero2, scaled(-1.0, kId2))
                                      : blocks(kZero2, kId2, kId2, kZero2);
  for (std::size_t i = 0; i < 3; ++i) g[i + 1] = blocks(kZero2, kPauli[i], scaled(-1.0, kPauli[i]), kZero2);
  return g;
}

}  // namespace

Mat4 identity4() {
  Mat4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  }
  return r;
}

Mat4 operator+(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = a[i][j] + b[i][j];
  }
  return r;
}

Mat4 operator*(Complex s, const Mat4& a) {
  Mat4 r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = s * a[i][j];
  }
  return r;
}

Spinor operator*(const Mat4& a, const Spinor& v) {
  Spinor r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
  }
  return r;
}

Mat4 adjoint(const Mat4& a) {
  Mat4 r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = std::conj(a[j][i]);
  }
  return r;
}

double max_abs_difference(const Mat4& a, const Mat4& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  }
  return m;
}

Complex sandwich(const Spinor& bar, const Mat4& m, const Spinor& v) { return contract(bar, m * v); }

Complex contract(const Spinor& bar, const Spinor& v) {
  Complex s{};
  for (std::size_t i = 0; i < 4; ++i) s += bar[i] * v[i];
  return s;
}

SpinorBasis::SpinorBasis(Representation rep, const Metric& metric, std::array<Mat4, 4> gamma)
    : rep_(rep), metric_(metric), gamma_(gamma) {}

SpinorBasis SpinorBasis::dirac(const Metric& metric) {
  if (metric.dim() != 4) fail(ErrorCode::InvalidArgument, "spinor basis needs a 4-dimensional metric");
  auto g = standard_gammas(Representation::dirac);
  if (metric == Metric::mostly_plus()) {
    for (auto& m : g) m = I * m;
  }
  return {Representation::dirac, metric, g};
}

SpinorBasis SpinorBasis::chiral(const Metric& metric) {
  if (metric.dim() != 4) fail(ErrorCode::InvalidArgument, "spinor basis needs a 4-dimensional metric");
  auto g = standard_gammas(Representation::chiral);
  if (metric == Metric::mostly_plus()) {
    for (auto& m : g) m = I * m;
  }
  return {Representation::chiral, metric, g};
}

Spinor SpinorBasis::bar(const Spinor& psi) const {
  Spinor r{};
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 4; ++i) r[j] += std::conj(psi[i]) * gamma_[0][i][j];
  }
  return r;
}

double SpinorBasis::clifford_defect() const {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const Mat4 anti = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu);
      const Mat4 expected = (mu == nu ? 2.0 * metric_(mu) : 0.0) * identity4();
      worst = std::max(worst, max_abs_difference(anti, expected));
    }
  }
  return worst;
}

Mat4 dirac_to_chiral() {
  const double r = 1.0 / std::sqrt(2.0);
  return blocks(scaled(r, kId2), scaled(-r, kId2), scaled(r, kId2), scaled(r, kId2));
}

}  // namespace scaleon
