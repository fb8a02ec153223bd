#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace csim {

using cplx = std::complex<double>;

// Extended precision used by the moment and similarity pipelines. Atom radii
// grow geometrically with the moment order, so products like p_d(z)^2 on the
// outer circles lose about 2d*log10(radius) digits.
using hp_real = boost::multiprecision::cpp_bin_float_100;
using hp_complex = boost::multiprecision::cpp_complex_100;

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
  using real = double;
};

template <>
struct scalar_traits<hp_complex> {
  using real = hp_real;
};

template <class C>
using real_of = typename scalar_traits<C>::real;

template <class C>
inline constexpr bool is_extended_v = std::is_same_v<C, hp_complex>;

template <class R>
R pi() {
  return boost::math::constants::pi<R>();
}

template <class R>
R machine_epsilon() {
  return std::numeric_limits<R>::epsilon();
}

inline double to_double(double x) { return x; }
inline double to_double(const hp_real& x) { return x.convert_to<double>(); }

template <class C>
C from_cplx(const cplx& z) {
  if constexpr (std::is_same_v<C, cplx>) {
    return z;
  } else {
    return C(real_of<C>(z.real()), real_of<C>(z.imag()));
  }
}

inline cplx to_cplx(const cplx& z) { return z; }
inline cplx to_cplx(const hp_complex& z) {
  return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

template <class C>
C make_polar(const real_of<C>& radius, const real_of<C>& angle) {
  using std::cos;
  using std::sin;
  return C(radius * cos(angle), radius * sin(angle));
}

template <class C>
real_of<C> modulus(const C& z) {
  using std::abs;
  return abs(z);
}

template <class C>
real_of<C> norm2(const C& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class C>
C conjugate(const C& z) {
  return C(z.real(), -z.imag());
}

template <class R>
bool is_finite(const R& x) {
  using std::isfinite;
  if constexpr (std::is_same_v<R, double>) {
    return std::isfinite(x);
  } else {
    return boost::multiprecision::isfinite(x);
  }
}

template <class C>
bool is_finite_complex(const C& z) {
  return is_finite(z.real()) && is_finite(z.imag());
}

/// Relative zero test: |x| <= tol * scale.
inline bool negligible(double magnitude, double scale, double tol) {
  return magnitude <= tol * scale;
}

}  // namespace csim
