#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace scaleon {

/// Engine for check number `index` of a run seeded with `seed`; every
/// check draws from its own stream so results do not depend on the order
/// in which checks execute.
std::mt19937_64 check_rng(std::uint64_t seed, std::uint64_t index);

double uniform(std::mt19937_64& rng, double lo, double hi);

/// Σ_k c_k·sin(q_k·x + φ_k) over the first `dim` coordinates, as field
/// expression text with constants printed to 17 significant digits.
std::string random_sinusoid_sum(std::mt19937_64& rng, int dim, int terms, double amplitude, double max_wavenumber);

}  // namespace scaleon
