#include "scaleon/spacetime.hpp"

#include <cmath>

#include "scaleon/error.hpp"

namespace scaleon {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 4) fail(ErrorCode::ConfigError, "dim must be in 1..4, got " + std::to_string(dim));
}

}  // namespace

Metric::Metric(int dim, std::array<double, 4> diag) : dim_(dim), diag_(diag) {
  for (int mu = dim; mu < 4; ++mu) diag_[static_cast<std::size_t>(mu)] = 0.0;
}

Metric Metric::mostly_minus(int dim) {
  check_dim(dim);
  return {dim, {1.0, -1.0, -1.0, -1.0}};
}

Metric Metric::mostly_plus(int dim) {
  check_dim(dim);
  return {dim, {-1.0, 1.0, 1.0, 1.0}};
}

FlatGrid::FlatGrid(const GridSpec& spec)
    : dim_(spec.dim),
      extents_(spec.extents),
      spacing_(spec.spacing),
      origin_(spec.origin),
      signature_(Metric::mostly_plus(spec.dim >= 1 && spec.dim <= 4 ? spec.dim : 1)),
      size_(1) {
  check_dim(dim_);
  for (int a = 0; a < 4; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (a >= dim_) {
      extents_[i] = 1;
      spacing_[i] = 1.0;
      origin_[i] = 0.0;
      continue;
    }
    if (extents_[i] == 0) fail(ErrorCode::ConfigError, "extents[" + std::to_string(a) + "] is zero");
    if (!(spacing_[i] > 0.0) || !std::isfinite(spacing_[i])) {
      fail(ErrorCode::ConfigError, "spacing[" + std::to_string(a) + "] must be positive");
    }
    size_ *= extents_[i];
  }
}

double FlatGrid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing_[static_cast<std::size_t>(a)];
  return v;
}

std::size_t FlatGrid::index(const Site& s) const noexcept {
  return ((s[0] * extents_[1] + s[1]) * extents_[2] + s[2]) * extents_[3] + s[3];
}

Site FlatGrid::site(std::size_t index) const noexcept {
  Site s{};
  for (int a = 3; a >= 0; --a) {
    const auto i = static_cast<std::size_t>(a);
    s[i] = index % extents_[i];
    index /= extents_[i];
  }
  return s;
}

Point FlatGrid::point(const Site& s) const noexcept {
  Point x{};
  for (int a = 0; a < dim_; ++a) {
    const auto i = static_cast<std::size_t>(a);
    x[i] = origin_[i] + static_cast<double>(s[i]) * spacing_[i];
  }
  return x;
}

bool FlatGrid::contains(const Point& x) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    const auto i = static_cast<std::size_t>(a);
    const double tol = 1e-9 * spacing_[i];
    const double hi = origin_[i] + static_cast<double>(extents_[i] - 1) * spacing_[i];
    if (x[i] < origin_[i] - tol || x[i] > hi + tol) return false;
  }
  return true;
}

std::optional<Site> FlatGrid::site_at(const Point& x) const noexcept {
  if (!contains(x)) return std::nullopt;
  Site s{};
  for (int a = 0; a < dim_; ++a) {
    const auto i = static_cast<std::size_t>(a);
    const double f = (x[i] - origin_[i]) / spacing_[i];
    const double r = std::round(f);
    if (std::abs(f - r) > 1e-7) return std::nullopt;
    s[i] = static_cast<std::size_t>(std::max(0.0, r));
  }
  return s;
}

bool FlatGrid::is_interior(const Site& s, std::size_t width) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (s[i] < width || s[i] + width >= extents_[i]) return false;
  }
  return true;
}

Region Region::whole(const FlatGrid& grid) {
  Region r;
  for (int a = 0; a < 4; ++a) r.hi[static_cast<std::size_t>(a)] = grid.extent(a) - 1;
  return r;
}

Region Region::interior(const FlatGrid& grid, std::size_t width) {
  Region r = whole(grid);
  for (int a = 0; a < grid.dim(); ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (grid.extent(a) <= 2 * width) fail(ErrorCode::OutOfDomain, "grid too small for an interior region");
    r.lo[i] = width;
    r.hi[i] = grid.extent(a) - 1 - width;
  }
  return r;
}

bool Region::contains(const Site& s) const noexcept {
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] < lo[i] || s[i] > hi[i]) return false;
  }
  return true;
}

}  // namespace scaleon
