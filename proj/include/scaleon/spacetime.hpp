#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

namespace scaleon {

using Complex = std::complex<double>;

/// Space-time point; axes beyond the active dimension stay at 0.
using Point = std::array<double, 4>;
/// Contravariant components (velocities, displacements).
using Vector4 = std::array<double, 4>;
/// Covariant components (gradients, gauge fields).
using Covector = std::array<double, 4>;
using ComplexCovector = std::array<Complex, 4>;

/// Site multi-index on a FlatGrid.
using Site = std::array<std::size_t, 4>;

enum class Execution { serial, parallel };

/// Diagonal flat metric restricted to the first `dim` axes.
class Metric {
 public:
  /// (+,-,-,-): used by the field-dynamics Lagrangians.
  static Metric mostly_minus(int dim = 4);
  /// (-,+,+,+): Minkowski metric of the geometry module.
  static Metric mostly_plus(int dim = 4);

  int dim() const noexcept { return dim_; }
  /// η_{μμ}; the inverse metric has the same diagonal.
  double operator()(int mu) const noexcept { return diag_[static_cast<std::size_t>(mu)]; }
  const std::array<double, 4>& diagonal() const noexcept { return diag_; }

  /// η^{μν} a_μ b_ν for real or complex components.
  template <class A, class B>
  auto contract(const std::array<A, 4>& a, const std::array<B, 4>& b) const {
    decltype(a[0] * b[0]) sum{};
    for (int mu = 0; mu < dim_; ++mu) sum += diag_[static_cast<std::size_t>(mu)] * (a[mu] * b[mu]);
    return sum;
  }

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  Metric(int dim, std::array<double, 4> diag);
  int dim_;
  std::array<double, 4> diag_;
};

struct GridSpec {
  int dim = 2;
  std::array<std::size_t, 4> extents{1, 1, 1, 1};
  std::array<double, 4> spacing{1.0, 1.0, 1.0, 1.0};
  Point origin{};
};

/// Uniform rectangular sampling of flat space-time. Sites are numbered
/// row-major with axis 0 slowest.
class FlatGrid {
 public:
  /// Validates the GridSpec; throws Error(ConfigError) naming the bad key.
  explicit FlatGrid(const GridSpec& spec);

  int dim() const noexcept { return dim_; }
  std::size_t extent(int axis) const noexcept { return extents_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const noexcept { return spacing_[static_cast<std::size_t>(axis)]; }
  const Point& origin() const noexcept { return origin_; }
  const Metric& signature() const noexcept { return signature_; }
  std::size_t size() const noexcept { return size_; }
  /// Volume element Π spacing over active axes.
  double cell_volume() const noexcept;

  std::size_t index(const Site& site) const noexcept;
  Site site(std::size_t index) const noexcept;
  Point point(const Site& site) const noexcept;
  Point point(std::size_t index) const noexcept { return point(site(index)); }

  /// True when x lies inside the grid box (with a small tolerance).
  bool contains(const Point& x) const noexcept;
  /// Site whose point coincides with x, if any.
  std::optional<Site> site_at(const Point& x) const noexcept;
  /// At least `width` sites away from every boundary on active axes.
  bool is_interior(const Site& site, std::size_t width = 1) const noexcept;

 private:
  int dim_;
  std::array<std::size_t, 4> extents_;
  std::array<double, 4> spacing_;
  Point origin_;
  Metric signature_;
  std::size_t size_;
};

/// Inclusive box of sites.
struct Region {
  Site lo{};
  Site hi{};

  static Region whole(const FlatGrid& grid);
  /// Sites at least `width` away from every boundary on active axes.
  static Region interior(const FlatGrid& grid, std::size_t width = 1);

  bool contains(const Site& site) const noexcept;
  std::size_t extent(int axis) const noexcept {
    return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)] + 1;
  }
  std::size_t size() const noexcept { return extent(0) * extent(1) * extent(2) * extent(3); }
};

}  // namespace scaleon
