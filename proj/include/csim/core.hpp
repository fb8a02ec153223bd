#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csim/errors.hpp"
#include "csim/scalar.hpp"

namespace csim {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest entry magnitude; the norm used by every relative tolerance test.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

/// Tridiagonal complex symmetric matrix: m(k,k) = diag[k],
/// m(k,k+1) = m(k+1,k) = offdiag[k], zero elsewhere.
struct Tridiagonal {
  std::vector<cplx> diag;
  std::vector<cplx> offdiag;

  Tridiagonal() = default;
  Tridiagonal(std::vector<cplx> b, std::vector<cplx> a) : diag(std::move(b)), offdiag(std::move(a)) {
    if (diag.size() < 2) throw InputError("tridiagonal matrix needs dimension >= 2");
    if (offdiag.size() + 1 != diag.size())
      throw InputError("off-diagonal must have exactly d-1 entries");
    for (const auto& z : diag)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("non-finite diagonal entry");
    for (const auto& z : offdiag)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("non-finite off-diagonal entry");
  }

  std::size_t dim() const noexcept { return diag.size(); }

  double norm() const {
    double n = 0.0;
    for (const auto& z : diag) n = std::max(n, std::abs(z));
    for (const auto& z : offdiag) n = std::max(n, std::abs(z));
    return n;
  }

  CMatrix dense() const {
    const auto d = static_cast<Eigen::Index>(dim());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) m(k, k) = diag[k];
    for (Eigen::Index k = 0; k + 1 < d; ++k) m(k, k + 1) = m(k + 1, k) = offdiag[k];
    return m;
  }

  friend bool operator==(const Tridiagonal&, const Tridiagonal&) = default;
};

/// Antilinear map J x = C * conj(x). C must be unitary and symmetric, which is
/// equivalent to J being an involution with (Jx, Jy) = (y, x).
class Conjugation {
 public:
  explicit Conjugation(CMatrix c, double tol = 1e-10) : c_(std::move(c)) {
    if (c_.rows() != c_.cols() || c_.rows() < 1) throw InputError("conjugation matrix must be square");
    if (!all_finite(c_)) throw InputError("conjugation matrix has non-finite entries");
    const auto n = c_.rows();
    const double unitary = max_abs(c_.adjoint() * c_ - CMatrix::Identity(n, n));
    const double symmetric = max_abs(c_ - c_.transpose());
    if (unitary > tol) throw InputError("conjugation matrix is not unitary (deviation " + std::to_string(unitary) + ")");
    if (symmetric > tol)
      throw InputError("conjugation matrix is not symmetric (deviation " + std::to_string(symmetric) + ")");
  }

  /// Plain coordinatewise conjugation, C = identity.
  static Conjugation coordinatewise(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return Conjugation(CMatrix::Identity(n, n));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(c_.rows()); }
  const CMatrix& matrix() const noexcept { return c_; }

  CVector apply(const CVector& x) const {
    if (x.size() != c_.rows()) throw InputError("conjugation applied to vector of wrong dimension");
    return c_ * x.conjugate();
  }

  /// Matrix of the linear map J A J, i.e. C conj(A) conj(C).
  CMatrix sandwich(const CMatrix& a) const { return c_ * a.conjugate() * c_.conjugate(); }

 private:
  CMatrix c_;
};

/// Determinant of the Gram matrix [(y_k, y_l)] with (x, y) = sum x_i conj(y_i).
/// Computed by a fully pivoted LU factorization of the Gram matrix.
inline cplx gram_det(std::span<const CVector> vectors) {
  if (vectors.empty()) throw InputError("gram_det needs at least one vector");
  const auto dim = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw InputError("gram_det: vectors have different dimensions");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  CMatrix gram(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) gram(k, l) = vectors[l].dot(vectors[k]);  // dot conjugates its left side
  return gram.fullPivLu().determinant();
}

/// Hadamard bound prod ||y_k||^2, the natural scale for |gram_det|.
inline double gram_scale(std::span<const CVector> vectors) {
  double s = 1.0;
  for (const auto& v : vectors) s *= v.squaredNorm();
  return s;
}

inline CVector unit_vector(std::size_t d, std::size_t k) {
  CVector e = CVector::Zero(static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(k)) = 1.0;
  return e;
}

}  // namespace csim
