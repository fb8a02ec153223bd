#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "csim/core.hpp"

namespace csim {

enum class ClassViolation { none, dimension, bandwidth, symmetry, zero_offdiagonal };

struct ClassCheck {
  bool member = false;
  std::optional<Tridiagonal> matrix;
  ClassViolation violation = ClassViolation::none;
  std::size_t row = 0;
  std::size_t col = 0;

  std::string message() const {
    const auto at = "(" + std::to_string(row) + "," + std::to_string(col) + ")";
    switch (violation) {
      case ClassViolation::none: return "tridiagonal complex symmetric with nonzero off-diagonal";
      case ClassViolation::dimension: return "dimension must be at least 2";
      case ClassViolation::bandwidth: return "not tridiagonal: entry " + at + " is nonzero";
      case ClassViolation::symmetry: return "not symmetric: entry " + at + " differs from its transpose";
      case ClassViolation::zero_offdiagonal:
        return "off-diagonal entry vanishes at k=" + std::to_string(row);
    }
    return "unknown";
  }
};

/// Membership test for tridiagonal complex symmetric matrices with nonzero
/// first off-diagonal. All comparisons are relative to max_abs(m).
inline ClassCheck is_class_matrix(const CMatrix& m, double eps = 1e-9) {
  if (m.rows() != m.cols()) throw InputError("matrix must be square");
  ClassCheck out;
  const auto d = m.rows();
  if (d < 2) throw InputError("matrix dimension must be at least 2");
  if (!all_finite(m)) throw InputError("matrix has non-finite entries");
  const double thresh = eps * max_abs(m);

  auto fail = [&](ClassViolation v, Eigen::Index r, Eigen::Index c) {
    out.violation = v;
    out.row = static_cast<std::size_t>(r);
    out.col = static_cast<std::size_t>(c);
    return out;
  };
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l)
      if (std::abs(k - l) > 1 && std::abs(m(k, l)) > thresh) return fail(ClassViolation::bandwidth, k, l);
  for (Eigen::Index k = 0; k + 1 < d; ++k)
    if (std::abs(m(k, k + 1) - m(k + 1, k)) > thresh) return fail(ClassViolation::symmetry, k + 1, k);
  for (Eigen::Index k = 0; k + 1 < d; ++k)
    if (!(std::abs(m(k, k + 1)) > thresh)) return fail(ClassViolation::zero_offdiagonal, k, k + 1);

  std::vector<cplx> b(static_cast<std::size_t>(d));
  std::vector<cplx> a(static_cast<std::size_t>(d - 1));
  for (Eigen::Index k = 0; k < d; ++k) b[k] = m(k, k);
  for (Eigen::Index k = 0; k + 1 < d; ++k) a[k] = 0.5 * (m(k, k + 1) + m(k + 1, k));
  out.member = true;
  out.matrix = Tridiagonal(std::move(b), std::move(a));
  return out;
}

inline ClassCheck is_class_matrix(const Tridiagonal& t, double eps = 1e-9) { return is_class_matrix(t.dense(), eps); }

/// Throws PreconditionError unless t is a class member.
inline void require_class_member(const Tridiagonal& t, double eps = 1e-9) {
  const auto check = is_class_matrix(t, eps);
  if (!check.member) throw PreconditionError(Hypothesis::class_membership, check.message());
}

/// max |J A J - A*| over entries. Compare against tol * max_abs(A).
inline double verify_j_symmetric(const CMatrix& a, const Conjugation& j) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != j.dim())
    throw InputError("operator and conjugation dimensions differ");
  return max_abs(j.sandwich(a) - a.adjoint());
}

inline std::vector<CVector> krylov_vectors(const CMatrix& a, const CVector& x0, std::size_t count) {
  std::vector<CVector> out;
  out.reserve(count);
  CVector v = x0;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(v);
    v = a * v;
  }
  return out;
}

/// Ratio smallest/largest singular value of the column-normalized Krylov matrix
/// [x0, A x0, ..., A^{d-1} x0].
inline double krylov_conditioning(const CMatrix& a, const CVector& x0) {
  const auto d = a.rows();
  const auto vs = krylov_vectors(a, x0, static_cast<std::size_t>(d));
  CMatrix k(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double n = vs[c].norm();
    if (n == 0.0) return 0.0;
    k.col(c) = vs[c] / n;
  }
  const auto sv = Eigen::JacobiSVD<CMatrix>(k).singularValues();
  return sv(d - 1) / sv(0);
}

inline constexpr double kCyclicityThreshold = 1e-8;

inline bool is_cyclic(const CMatrix& a, const CVector& x0) {
  return krylov_conditioning(a, x0) > kCyclicityThreshold;
}

struct GramEntry {
  std::size_t n;
  cplx gamma;
  double scale;  // Hadamard bound prod ||y||^2 of the n+2 vectors

  double relative() const { return scale > 0 ? std::abs(gamma) / scale : std::abs(gamma); }
};

struct GramReport {
  std::vector<GramEntry> values;
  double tol = 0.0;
  bool passes = false;

  double max_relative() const {
    double m = 0.0;
    for (const auto& e : values) m = std::max(m, e.relative());
    return m;
  }
};

namespace detail {
inline void check_square(const CMatrix& a, const CVector& x0, const Conjugation& j) {
  if (a.rows() != a.cols()) throw InputError("operator must be square");
  if (a.rows() < 2) throw InputError("operator dimension must be at least 2");
  if (x0.size() != a.rows() || j.dim() != static_cast<std::size_t>(a.rows()))
    throw InputError("operator, vector and conjugation dimensions differ");
  if (!all_finite(a) || !x0.allFinite()) throw InputError("non-finite input");
}

inline void require_fixed_and_cyclic(const CMatrix& a, const CVector& x0, const Conjugation& j, double tol) {
  const double dev = (j.apply(x0) - x0).norm();
  if (dev > tol * x0.norm() || x0.norm() == 0.0)
    throw PreconditionError(Hypothesis::fixed_by_conjugation,
                            "x0 is not fixed by the conjugation (|Jx0 - x0| = " + std::to_string(dev) + ")");
  if (!is_cyclic(a, x0))
    throw PreconditionError(Hypothesis::cyclicity, "x0 is not a cyclic vector: Krylov matrix is rank deficient");
}
}  // namespace detail

/// Gram determinants Gamma(x_0, ..., x_n, x_n^*) for n = 1..d-1, where
/// x_k = A^k x0 and x_n^* = (A^*)^n x0. Passes when every one is zero relative
/// to its Hadamard bound.
inline GramReport gram_condition_check(const CMatrix& a, const CVector& x0, const Conjugation& j, double tol = 1e-9) {
  detail::check_square(a, x0, j);
  detail::require_fixed_and_cyclic(a, x0, j, tol);
  const auto d = static_cast<std::size_t>(a.rows());
  const auto xs = krylov_vectors(a, x0, d);
  const auto xs_adj = krylov_vectors(a.adjoint(), x0, d);

  GramReport report;
  report.tol = tol;
  report.passes = true;
  for (std::size_t n = 1; n < d; ++n) {
    std::vector<CVector> ys(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n + 1));
    ys.push_back(xs_adj[n]);
    GramEntry e{n, gram_det(ys), gram_scale(ys)};
    if (e.relative() > tol) report.passes = false;
    report.values.push_back(e);
  }
  return report;
}

struct CanonicalForm {
  CMatrix basis;  // columns u_0..u_{d-1}
  Tridiagonal matrix;
  std::vector<double> phases;  // phi_r in [0, 2 pi) with J g_r = exp(i phi_r) g_r
};

/// Orthonormal basis in which A is tridiagonal complex symmetric.
///
/// Orthonormalizes the Krylov sequence of x0 (Arnoldi form, each new vector
/// orthogonalized twice), reads off the phase of J g_r = exp(i phi_r) g_r and
/// sets u_r = exp(i phi_r / 2) g_r so that J u_r = u_r.
inline CanonicalForm canonicalize(const CMatrix& a, const CVector& x0, const Conjugation& j, double tol = 1e-9) {
  detail::check_square(a, x0, j);
  const double scale = max_abs(a);
  const double jres = verify_j_symmetric(a, j);
  if (jres > tol * scale)
    throw PreconditionError(Hypothesis::j_symmetry,
                            "operator is not J-symmetric (|JAJ - A*| = " + std::to_string(jres) + ")");
  const auto gram = gram_condition_check(a, x0, j, tol);
  if (!gram.passes)
    throw PreconditionError(Hypothesis::gram_condition,
                            "Gram determinant condition fails (max relative |Gamma_n| = " +
                                std::to_string(gram.max_relative()) + ")");

  const auto d = a.rows();
  CMatrix g(d, d);
  g.col(0) = x0 / x0.norm();
  for (Eigen::Index r = 1; r < d; ++r) {
    CVector v = a * g.col(r - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const CVector h = g.leftCols(r).adjoint() * v;
      v -= g.leftCols(r) * h;
    }
    g.col(r) = v / v.norm();
  }

  CanonicalForm out;
  out.basis.resize(d, d);
  out.phases.resize(static_cast<std::size_t>(d));
  const double two_pi = 2.0 * pi<double>();
  for (Eigen::Index r = 0; r < d; ++r) {
    const CVector gr = g.col(r);
    const CVector jg = j.apply(gr);
    const cplx beta = gr.dot(jg);  // (J g_r, g_r)
    const double dev = (jg - beta * gr).norm();
    if (dev > std::sqrt(tol))
      throw ConsistencyError("J g_" + std::to_string(r) + " is not proportional to g_" + std::to_string(r) +
                             " (deviation " + std::to_string(dev) + ")");
    double phi = std::arg(beta);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    out.phases[static_cast<std::size_t>(r)] = phi;
    out.basis.col(r) = std::polar(1.0, 0.5 * phi) * gr;
  }

  const CMatrix m = out.basis.adjoint() * a * out.basis;
  const auto check = is_class_matrix(m, tol);
  if (!check.member) throw ConsistencyError("canonical matrix is not in class: " + check.message());
  out.matrix = *check.matrix;
  return out;
}

}  // namespace csim
