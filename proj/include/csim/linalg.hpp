#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "csim/errors.hpp"
#include "csim/scalar.hpp"

namespace csim {

/// Singular values (descending) of a matrix given by its columns, via one-sided
/// Jacobi rotations. Works for any scalar type with a scalar_traits entry, so
/// the extended-precision node matrices never pass through double.
template <class C>
std::vector<real_of<C>> singular_values(std::vector<std::vector<C>> cols, int max_sweeps = 80) {
  using R = real_of<C>;
  using std::abs;
  using std::sqrt;
  const std::size_t n = cols.size();
  if (n == 0) return {};
  const std::size_t m = cols.front().size();
  for (const auto& c : cols)
    if (c.size() != m) throw InputError("singular_values: ragged columns");

  const R eps = machine_epsilon<R>();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& x = cols[p];
        auto& y = cols[q];
        R alpha = 0, beta = 0;
        C gamma(0);
        for (std::size_t i = 0; i < m; ++i) {
          alpha += norm2(x[i]);
          beta += norm2(y[i]);
          gamma += conjugate(x[i]) * y[i];
        }
        const R g = modulus(gamma);
        if (g == 0 || g <= eps * sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate y by the phase of gamma so the pair becomes a real 2x2 problem.
        const C phase = C(gamma.real() / g, -gamma.imag() / g);
        const R zeta = (beta - alpha) / (2 * g);
        const R t = (zeta >= 0 ? R(1) : R(-1)) / (abs(zeta) + sqrt(1 + zeta * zeta));
        const R c = 1 / sqrt(1 + t * t);
        const R s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const C yi = phase * y[i];
          const C xi = x[i];
          x[i] = c * xi - s * yi;
          y[i] = s * xi + c * yi;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<R> sv;
  sv.reserve(n);
  for (const auto& c : cols) {
    R s = 0;
    for (const auto& v : c) s += norm2(v);
    sv.push_back(sqrt(s));
  }
  std::sort(sv.begin(), sv.end(), [](const R& a, const R& b) { return a > b; });
  return sv;
}

}  // namespace csim
