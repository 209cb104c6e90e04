#pragma once

// Grid sweeps. Each kernel has a serial reference implementation and an
// OpenMP implementation with identical results: element-wise kernels are
// trivially identical, and reductions accumulate one partial per row
// (fixed axis-0 index) in index order and then combine the rows in order,
// so the floating-point result does not depend on the thread count.

#include <functional>
#include <vector>

#include "scaleon/spacetime.hpp"

namespace scaleon::kernels {

using RealSiteFunction = std::function<double(const Point&)>;
using ComplexSiteFunction = std::function<Complex(const Point&)>;
/// Term of a reduction, called with the linear site index.
using ComplexTerm = std::function<Complex(std::size_t)>;
using RealTerm = std::function<double(std::size_t)>;

namespace serial {

std::vector<double> sample(const FlatGrid& grid, const RealSiteFunction& f);
std::vector<Complex> sample(const FlatGrid& grid, const ComplexSiteFunction& f);
Complex sum(const FlatGrid& grid, const Region& region, const ComplexTerm& term);
double max_of(const FlatGrid& grid, const Region& region, const RealTerm& term);

}  // namespace serial

namespace omp {

std::vector<double> sample(const FlatGrid& grid, const RealSiteFunction& f);
std::vector<Complex> sample(const FlatGrid& grid, const ComplexSiteFunction& f);
Complex sum(const FlatGrid& grid, const Region& region, const ComplexTerm& term);
double max_of(const FlatGrid& grid, const Region& region, const RealTerm& term);

}  // namespace omp

inline std::vector<double> sample(const FlatGrid& grid, const RealSiteFunction& f, Execution exec) {
  return exec == Execution::parallel ? omp::sample(grid, f) : serial::sample(grid, f);
}

inline std::vector<Complex> sample(const FlatGrid& grid, const ComplexSiteFunction& f, Execution exec) {
  return exec == Execution::parallel ? omp::sample(grid, f) : serial::sample(grid, f);
}

inline Complex sum(const FlatGrid& grid, const Region& region, const ComplexTerm& term, Execution exec) {
  return exec == Execution::parallel ? omp::sum(grid, region, term) : serial::sum(grid, region, term);
}

inline double max_of(const FlatGrid& grid, const Region& region, const RealTerm& term, Execution exec) {
  return exec == Execution::parallel ? omp::max_of(grid, region, term)
                                     : serial::max_of(grid, region, term);
}

}  // namespace scaleon::kernels
