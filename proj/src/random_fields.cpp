#include "scaleon/random_fields.hpp"

#include "scaleon/csv.hpp"

namespace scaleon {

std::mt19937_64 check_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// std::uniform_real_distribution is implementation-defined; this mapping is
// fixed so streams reproduce across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::string random_sinusoid_sum(std::mt19937_64& rng, int dim, int terms, double amplitude, double max_wavenumber) {
  std::string out;
  for (int k = 0; k < terms; ++k) {
    const double c = uniform(rng, -amplitude, amplitude);
    std::string arg = format_double(uniform(rng, -3.14159, 3.14159));
    for (int a = 0; a < dim; ++a) {
      arg += " + " + format_double(uniform(rng, -max_wavenumber, max_wavenumber)) + "*x" + std::to_string(a);
    }
    if (!out.empty()) out += " + ";
    out += format_double(c) + "*sin(" + arg + ")";
  }
  return out.empty() ? "0" : out;
}

}  // namespace scaleon
