#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "csim/core.hpp"

namespace csim {

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct GeneratorBox {
  double diag_half_width = 1.0;  // b_k uniform in [-w, w] x [-w, w]
  double offdiag_min = 0.5;      // a_k uniform (by area) in the annulus min <= |a| <= max
  double offdiag_max = 2.0;
};

inline Tridiagonal random_class_matrix(std::mt19937_64& rng, std::size_t d, const GeneratorBox& box = {}) {
  if (d < 2) throw InputError("dimension must be at least 2");
  std::vector<cplx> b(d), a(d - 1);
  const double w = box.diag_half_width;
  for (auto& v : b) {
    const double re = w * (2.0 * unit_uniform(rng) - 1.0);
    const double im = w * (2.0 * unit_uniform(rng) - 1.0);
    v = {re, im};
  }
  const double r0 = box.offdiag_min * box.offdiag_min;
  const double r1 = box.offdiag_max * box.offdiag_max;
  for (auto& v : a) {
    const double r = std::sqrt(r0 + (r1 - r0) * unit_uniform(rng));
    const double theta = 2.0 * pi<double>() * unit_uniform(rng);
    v = std::polar(r, theta);
  }
  return Tridiagonal(std::move(b), std::move(a));
}

inline Tridiagonal random_class_matrix(std::uint64_t seed, std::size_t d, const GeneratorBox& box = {}) {
  std::mt19937_64 rng(seed);
  return random_class_matrix(rng, d, box);
}

}  // namespace csim
