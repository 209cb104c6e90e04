#pragma once

#include <array>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "scaleon/expression.hpp"
#include "scaleon/spacetime.hpp"

namespace scaleon {

class RealField;
using RealFieldPtr = std::shared_ptr<const RealField>;

/// Real scalar function on flat space-time with first and second partials.
class RealField {
 public:
  virtual ~RealField() = default;

  virtual double value(const Point& x) const = 0;
  virtual double derivative(const Point& x, int axis) const = 0;
  virtual double second_derivative(const Point& x, int a, int b) const = 0;
  /// ∂_axis of this field as a field in its own right.
  virtual RealFieldPtr derivative_field(int axis) const = 0;
  virtual bool contains(const Point& x) const { (void)x; return true; }
  /// Exact derivatives (closed form) rather than finite differences.
  virtual bool is_analytic() const = 0;
};

/// Closed-form field over the variables x0..x3; derivatives are symbolic.
class AnalyticField final : public RealField {
 public:
  explicit AnalyticField(Expr expr);

  static RealFieldPtr make(Expr expr);
  static RealFieldPtr parse(std::string_view text);
  static RealFieldPtr constant(double c);

  double value(const Point& x) const override;
  double derivative(const Point& x, int axis) const override;
  double second_derivative(const Point& x, int a, int b) const override;
  RealFieldPtr derivative_field(int axis) const override;
  bool is_analytic() const override { return true; }

  const Expr& expr() const noexcept { return expr_; }

 private:
  Expr expr_;
  std::array<Expr, 4> first_;
  std::array<std::array<Expr, 4>, 4> second_;
};

/// Samples on a FlatGrid. Values are defined at sites only; derivatives use
/// second-order central differences with one-sided second-order stencils on
/// the boundary.
class GridField final : public RealField {
 public:
  GridField(FlatGrid grid, std::vector<double> samples);

  static std::shared_ptr<const GridField> sample(const FlatGrid& grid, const RealField& field,
                                                 Execution exec = Execution::serial);

  double value(const Point& x) const override;
  double derivative(const Point& x, int axis) const override;
  double second_derivative(const Point& x, int a, int b) const override;
  RealFieldPtr derivative_field(int axis) const override;
  bool contains(const Point& x) const override { return grid_.contains(x); }
  bool is_analytic() const override { return false; }

  double at(const Site& s) const { return samples_[grid_.index(s)]; }
  double derivative_at(const Site& s, int axis) const;
  double second_derivative_at(const Site& s, int a, int b) const;

  const FlatGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  Site require_site(const Point& x) const;

  FlatGrid grid_;
  std::vector<double> samples_;
};

/// c + Σ wᵢ fᵢ.
class LinearCombinationField final : public RealField {
 public:
  using Term = std::pair<double, RealFieldPtr>;

  LinearCombinationField(double offset, std::vector<Term> terms);

  double value(const Point& x) const override;
  double derivative(const Point& x, int axis) const override;
  double second_derivative(const Point& x, int a, int b) const override;
  RealFieldPtr derivative_field(int axis) const override;
  bool contains(const Point& x) const override;
  bool is_analytic() const override;

 private:
  double offset_;
  std::vector<Term> terms_;
};

/// Complex field as a pair of real component fields.
class ComplexField {
 public:
  ComplexField();
  ComplexField(RealFieldPtr re, RealFieldPtr im);

  static ComplexField constant(Complex c);
  static ComplexField parse(std::string_view re, std::string_view im);

  Complex value(const Point& x) const;
  Complex derivative(const Point& x, int axis) const;
  Complex second_derivative(const Point& x, int a, int b) const;
  bool contains(const Point& x) const;
  bool is_analytic() const;

  /// Grid-backed copy of this field.
  ComplexField sampled_on(const FlatGrid& grid, Execution exec = Execution::serial) const;

  const RealFieldPtr& re() const noexcept { return re_; }
  const RealFieldPtr& im() const noexcept { return im_; }

 private:
  RealFieldPtr re_;
  RealFieldPtr im_;
};

/// Four real component fields A_μ.
class CovectorField {
 public:
  CovectorField();
  explicit CovectorField(std::array<RealFieldPtr, 4> components);

  static CovectorField zero();
  static CovectorField gradient_of(const RealField& f);
  static CovectorField parse(const std::array<std::string_view, 4>& components);

  Covector value(const Point& x) const;
  /// ∂_ν A_μ.
  double derivative(const Point& x, int mu, int nu) const;
  /// η^{μν} ∂_ν A_μ.
  double divergence(const Point& x, const Metric& metric) const;
  bool contains(const Point& x) const;

  const RealFieldPtr& component(int mu) const { return components_[static_cast<std::size_t>(mu)]; }

  /// Σ wᵢ Cᵢ componentwise.
  static CovectorField combine(const std::vector<std::pair<double, CovectorField>>& terms);

 private:
  std::array<RealFieldPtr, 4> components_;
};

}  // namespace scaleon
