#include "scaleon/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace scaleon::kernels {

namespace {

// Sites of one row: the region with axis 0 pinned to `i0`, visited in
// linear-index order.
template <class Fn>
void for_row(const FlatGrid& grid, const Region& region, std::size_t i0, Fn&& fn) {
  Site s{i0, 0, 0, 0};
  for (s[1] = region.lo[1]; s[1] <= region.hi[1]; ++s[1]) {
    for (s[2] = region.lo[2]; s[2] <= region.hi[2]; ++s[2]) {
      for (s[3] = region.lo[3]; s[3] <= region.hi[3]; ++s[3]) fn(grid.index(s));
    }
  }
}

Complex row_sum(const FlatGrid& grid, const Region& region, std::size_t i0, const ComplexTerm& term) {
  Complex partial{};
  for_row(grid, region, i0, [&](std::size_t idx) { partial += term(idx); });
  return partial;
}

double row_max(const FlatGrid& grid, const Region& region, std::size_t i0, const RealTerm& term) {
  double m = 0.0;
  for_row(grid, region, i0, [&](std::size_t idx) {
    const double v = term(idx);
    // NaN must propagate so callers can detect numeric failure.
    if (std::isnan(v) || v > m) m = std::isnan(m) ? m : v;
  });
  return m;
}

// Exceptions must not escape an OpenMP region; the first one is captured
// and rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
#pragma omp critical(scaleon_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

namespace serial {

std::vector<double> sample(const FlatGrid& grid, const RealSiteFunction& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

std::vector<Complex> sample(const FlatGrid& grid, const ComplexSiteFunction& f) {
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

Complex sum(const FlatGrid& grid, const Region& region, const ComplexTerm& term) {
  Complex total{};
  for (std::size_t i0 = region.lo[0]; i0 <= region.hi[0]; ++i0) total += row_sum(grid, region, i0, term);
  return total;
}

double max_of(const FlatGrid& grid, const Region& region, const RealTerm& term) {
  double m = 0.0;
  for (std::size_t i0 = region.lo[0]; i0 <= region.hi[0]; ++i0) {
    const double r = row_max(grid, region, i0, term);
    if (std::isnan(r) || r > m) m = std::isnan(m) ? m : r;
  }
  return m;
}

}  // namespace serial

namespace omp {

std::vector<double> sample(const FlatGrid& grid, const RealSiteFunction& f) {
  std::vector<double> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    slot.run([&] { out[static_cast<std::size_t>(i)] = f(grid.point(static_cast<std::size_t>(i))); });
  }
  slot.rethrow();
  return out;
}

std::vector<Complex> sample(const FlatGrid& grid, const ComplexSiteFunction& f) {
  std::vector<Complex> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    slot.run([&] { out[static_cast<std::size_t>(i)] = f(grid.point(static_cast<std::size_t>(i))); });
  }
  slot.rethrow();
  return out;
}

Complex sum(const FlatGrid& grid, const Region& region, const ComplexTerm& term) {
  const auto rows = static_cast<std::ptrdiff_t>(region.extent(0));
  std::vector<Complex> partial(static_cast<std::size_t>(rows));
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    slot.run([&] {
      partial[static_cast<std::size_t>(r)] =
          row_sum(grid, region, region.lo[0] + static_cast<std::size_t>(r), term);
    });
  }
  slot.rethrow();
  Complex total{};
  for (const Complex& p : partial) total += p;
  return total;
}

double max_of(const FlatGrid& grid, const Region& region, const RealTerm& term) {
  const auto rows = static_cast<std::ptrdiff_t>(region.extent(0));
  std::vector<double> partial(static_cast<std::size_t>(rows));
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    slot.run([&] {
      partial[static_cast<std::size_t>(r)] =
          row_max(grid, region, region.lo[0] + static_cast<std::size_t>(r), term);
    });
  }
  slot.rethrow();
  double m = 0.0;
  for (double p : partial) {
    if (std::isnan(p) || p > m) m = std::isnan(m) ? m : p;
  }
  return m;
}

}  // namespace omp

}  // namespace scaleon::kernels
