#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "csim/linalg.hpp"
#include "csim/measure.hpp"
#include "csim/moments.hpp"

namespace csim {

/// Monomial coefficients of p_0..p_{n_max}; row n has n + 1 entries,
/// coefficients(n)[j] multiplies lambda^j.
template <class C = hp_complex>
class PolynomialFamily {
 public:
  PolynomialFamily() = default;
  explicit PolynomialFamily(std::vector<std::vector<C>> rows) : rows_(std::move(rows)) {}

  std::size_t max_degree() const noexcept { return rows_.empty() ? 0 : rows_.size() - 1; }
  const std::vector<C>& coefficients(std::size_t n) const { return rows_.at(n); }
  const std::vector<std::vector<C>>& rows() const noexcept { return rows_; }
  const C& leading(std::size_t n) const { return rows_.at(n).back(); }

  /// Horner evaluation from the coefficient table.
  C evaluate(std::size_t n, const C& z) const {
    const auto& c = rows_.at(n);
    C v(0);
    for (std::size_t j = c.size(); j-- > 0;) v = v * z + c[j];
    return v;
  }

 private:
  std::vector<std::vector<C>> rows_;
};

namespace detail {
template <class C>
struct RecurrenceCoefficients {
  std::vector<C> b;
  std::vector<C> a;
};

/// b_0..b_{n_max-1}, a_0..a_{n_max-1} of the extended matrix, checked nonzero.
template <class C>
RecurrenceCoefficients<C> recurrence_coefficients(const Tridiagonal& m, std::size_t n_max, double eps) {
  const auto ext = extend_matrix(m, std::max(m.dim(), n_max + 1));
  const double thresh = eps * m.norm();
  RecurrenceCoefficients<C> rc;
  for (std::size_t n = 0; n < n_max; ++n) {
    const cplx an = ext.offdiag(n);
    if (!(std::abs(an) > thresh))
      throw PreconditionError(Hypothesis::class_membership,
                              "off-diagonal entry vanishes at k=" + std::to_string(n) + "; cannot divide by a_" +
                                  std::to_string(n));
    rc.b.push_back(from_cplx<C>(ext.diag(n)));
    rc.a.push_back(from_cplx<C>(an));
  }
  return rc;
}
}  // namespace detail

/// Coefficient table of p_0..p_{n_max} from
///   a_{n-1} p_{n-1} + b_n p_n + a_n p_{n+1} = lambda p_n,  p_0 = 1, p_{-1} = 0.
template <class C = hp_complex>
PolynomialFamily<C> build_polynomials(const Tridiagonal& m, std::size_t n_max, double eps = 1e-9) {
  const auto rc = detail::recurrence_coefficients<C>(m, n_max, eps);
  std::vector<std::vector<C>> rows;
  rows.push_back({C(1)});
  for (std::size_t n = 0; n < n_max; ++n) {
    const auto& pn = rows[n];
    std::vector<C> next(n + 2, C(0));
    for (std::size_t j = 0; j <= n; ++j) {
      next[j + 1] += pn[j];
      next[j] -= rc.b[n] * pn[j];
    }
    if (n > 0) {
      const auto& prev = rows[n - 1];
      for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= rc.a[n - 1] * prev[j];
    }
    for (auto& v : next) v /= rc.a[n];
    rows.push_back(std::move(next));
  }
  return PolynomialFamily<C>(std::move(rows));
}

/// p_0(z)..p_{n_max}(z) straight from the three-term recurrence.
namespace detail {
template <class C>
std::vector<C> run_recurrence(const RecurrenceCoefficients<C>& rc, std::size_t n_max, const C& z) {
  std::vector<C> p{C(1)};
  p.reserve(n_max + 1);
  for (std::size_t n = 0; n < n_max; ++n) {
    C v = (z - rc.b[n]) * p[n];
    if (n > 0) v -= rc.a[n - 1] * p[n - 1];
    p.push_back(v / rc.a[n]);
  }
  return p;
}
}  // namespace detail

template <class C = hp_complex>
std::vector<C> recurrence_values(const Tridiagonal& m, std::size_t n_max, const C& z, double eps = 1e-9) {
  return detail::run_recurrence(detail::recurrence_coefficients<C>(m, n_max, eps), n_max, z);
}

/// table[k][j] = p_k(z_j) for k = 0..n_max over the given atoms.
template <class C>
std::vector<std::vector<C>> node_values(const Tridiagonal& m, std::span<const Atom<C>> atoms, std::size_t n_max) {
  const auto rc = detail::recurrence_coefficients<C>(m, n_max, 1e-9);
  std::vector<std::vector<C>> table(n_max + 1, std::vector<C>(atoms.size()));
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const auto p = detail::run_recurrence(rc, n_max, atoms[j].z);
    for (std::size_t k = 0; k <= n_max; ++k) table[k][j] = p[k];
  }
  return table;
}

namespace detail {
template <class C>
std::vector<std::vector<C>> dense_of(const Tridiagonal& m) {
  const std::size_t d = m.dim();
  std::vector<std::vector<C>> a(d, std::vector<C>(d, C(0)));
  for (std::size_t k = 0; k < d; ++k) a[k][k] = from_cplx<C>(m.diag[k]);
  for (std::size_t k = 0; k + 1 < d; ++k) a[k][k + 1] = a[k + 1][k] = from_cplx<C>(m.offdiag[k]);
  return a;
}

template <class C>
std::vector<C> multiply(const std::vector<std::vector<C>>& a, const std::vector<C>& x) {
  std::vector<C> y(a.size(), C(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}
}  // namespace detail

/// p_k(M) e_0 by Horner's scheme on the dense matrix; equals e_k for k < d.
template <class C = hp_complex>
std::vector<C> poly_of_operator_vector(const Tridiagonal& m, const PolynomialFamily<C>& polys, std::size_t k) {
  const std::size_t d = m.dim();
  if (k >= d) throw InputError("poly_of_operator_vector: k must be below the dimension");
  const auto a = detail::dense_of<C>(m);
  const auto& c = polys.coefficients(k);
  std::vector<C> v(d, C(0));
  for (std::size_t j = c.size(); j-- > 0;) {
    v = detail::multiply(a, v);
    v[0] += c[j];
  }
  return v;
}

/// Everything needed to state T A T^{-1} = Z_0 + a(z) (., b(z)) in L^2_mu:
/// T sends the basis vector u_k to p_k, a(z) = -a_{d-1} p_d(z) and
/// b(z) = conj(p_{d-1}(z)).
template <class C = hp_complex>
struct SimilarityData {
  Tridiagonal matrix;
  MomentSequence<C> moments;
  MomentSolution<C> solution;
  AtomicMeasure<C> measure;
  PolynomialFamily<C> polys;  // degrees 0..d
  C rank_one_scale;           // a_{d-1} of the extended matrix

  std::size_t dim() const noexcept { return matrix.dim(); }

  C left_factor(const C& z) const { return -rank_one_scale * polys.evaluate(dim(), z); }
  C right_factor(const C& z) const { return conjugate(polys.evaluate(dim() - 1, z)); }

  std::vector<C> left_factor_coefficients() const {
    auto c = polys.coefficients(dim());
    for (auto& v : c) v = -rank_one_scale * v;
    return c;
  }
};

/// max |pairing(p_n, p_m) - delta_{nm}| for n, m <= n_max. The bilinear
/// pairing is the one that makes the family orthonormal; the sesquilinear one
/// is exposed for contrast.
template <class C>
double orthonormality_residual(const Tridiagonal& m, const AtomicMeasure<C>& mu, std::size_t n_max,
                               bool sesquilinear = false) {
  const auto table = node_values<C>(m, mu.atoms(), n_max);
  real_of<C> worst = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t k = 0; k <= n_max; ++k) {
      const C g = sesquilinear ? inner_l2mu<C>(table[n], table[k], mu) : bilinear_moment<C>(table[n], table[k], mu);
      const C target = n == k ? C(1) : C(0);
      worst = std::max(worst, real_of<C>(modulus(C(g - target))));
    }
  }
  return to_double(worst);
}

/// Singular values of V[j][k] = sqrt(m_j) p_k(z_j), k < d. The atoms need not
/// form a valid measure, so degenerate configurations can be probed.
template <class C>
std::vector<real_of<C>> node_singular_values(const Tridiagonal& m, std::span<const Atom<C>> atoms) {
  using std::sqrt;
  const std::size_t d = m.dim();
  if (atoms.size() < d) throw InputError("node matrix needs at least d atoms");
  auto table = node_values<C>(m, atoms, d - 1);
  for (auto& col : table)
    for (std::size_t j = 0; j < atoms.size(); ++j) col[j] *= C(sqrt(atoms[j].mass));
  return singular_values<C>(std::move(table));
}

/// Smallest singular value of the node matrix; positive certifies that T is injective.
template <class C>
double check_invertible(const SimilarityData<C>& data) {
  return to_double(node_singular_values<C>(data.matrix, data.measure.atoms()).back());
}

struct TransformOptions {
  std::size_t rho = 0;  // 0 selects 2d + 1
  RadiusSchedule schedule{};
  double orthonormality_tol = 1e-8;
  double eps = 1e-9;
};

/// Full construction: spectral moments of order 0..rho, an atomic solution of
/// the moment problem, and the polynomial family up to degree d. Throws
/// ConsistencyError when the measure fails orthonormality or the node matrix
/// is rank deficient.
template <class C = hp_complex>
SimilarityData<C> build_transform(const Tridiagonal& m, const TransformOptions& opts = {}) {
  require_class_member(m, opts.eps);
  const std::size_t d = m.dim();
  const std::size_t rho = opts.rho == 0 ? 2 * d + 1 : opts.rho;
  if (rho <= 2 * d) throw InputError("rho must exceed 2d = " + std::to_string(2 * d));

  SimilarityData<C> out;
  out.matrix = m;
  out.moments = spectral_moments<C>(m, rho, 0, opts.eps);
  out.solution = algorithm1<C>(out.moments, opts.schedule);
  out.measure = out.solution.measure;
  out.polys = build_polynomials<C>(m, d, opts.eps);
  out.rank_one_scale = from_cplx<C>(extend_matrix(m, d + 1).offdiag(d - 1));

  if (out.measure.size() <= 2 * d) throw ConsistencyError("measure has at most 2d atoms");
  const double orth = orthonormality_residual<C>(m, out.measure, d);
  if (!(orth <= opts.orthonormality_tol))
    throw ConsistencyError("bilinear orthonormality fails: max residual " + std::to_string(orth));
  const auto sv = node_singular_values<C>(m, out.measure.atoms());
  const real_of<C> rank_tol = real_of<C>(out.measure.size()) * 1000 * machine_epsilon<real_of<C>>() * sv.front();
  if (!(sv.back() > rank_tol))
    throw ConsistencyError("node matrix is rank deficient: smallest singular value " +
                           std::to_string(to_double(sv.back())));
  return out;
}

/// Values at the atoms of (T A T^{-1} u) for u = sum xi_k p_k: take the
/// coordinates xi in the basis u_k, apply M, and evaluate in the p-basis.
template <class C>
std::vector<C> apply_lhs(const SimilarityData<C>& data, const std::vector<C>& xi) {
  const std::size_t d = data.dim();
  if (xi.size() != d) throw InputError("coefficient vector must have length d");
  const auto eta = detail::multiply(detail::dense_of<C>(data.matrix), xi);
  const auto table = node_values<C>(data.matrix, data.measure.atoms(), d - 1);
  std::vector<C> out(data.measure.size(), C(0));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += eta[k] * table[k][j];
  return out;
}

/// Values at the atoms of z u(z) + a(z) (u, b)_{L^2_mu}.
template <class C>
std::vector<C> apply_rhs(const SimilarityData<C>& data, const std::vector<C>& xi) {
  const std::size_t d = data.dim();
  if (xi.size() != d) throw InputError("coefficient vector must have length d");
  const auto atoms = data.measure.atoms();
  const auto table = node_values<C>(data.matrix, atoms, d);
  std::vector<C> u(atoms.size(), C(0)), b(atoms.size()), a(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    for (std::size_t k = 0; k < d; ++k) u[j] += xi[k] * table[k][j];
    b[j] = conjugate(table[d - 1][j]);
    a[j] = -data.rank_one_scale * table[d][j];
  }
  const C ip = inner_l2mu<C>(u, b, data.measure);
  std::vector<C> out(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) out[j] = atoms[j].z * u[j] + a[j] * ip;
  return out;
}

struct SimilarityReport {
  std::vector<double> residuals;           // L^2_mu relative residual per basis vector
  std::vector<double> max_atom_deviation;  // max over atoms of |lhs - rhs| per basis vector
  double max_residual = 0.0;
  double tol = 0.0;
  bool passes = false;
};

/// Checks T A T^{-1} e_k against the rank-one representation for every basis vector.
template <class C>
SimilarityReport verify_similarity(const SimilarityData<C>& data, double tol = 1e-8) {
  using R = real_of<C>;
  using std::sqrt;
  SimilarityReport rep;
  rep.tol = tol;
  const std::size_t d = data.dim();
  const auto atoms = data.measure.atoms();
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<C> e(d, C(0));
    e[k] = C(1);
    const auto lhs = apply_lhs(data, e);
    const auto rhs = apply_rhs(data, e);
    R diff = 0, norm = 0, worst = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const C delta = lhs[j] - rhs[j];
      diff += atoms[j].mass * norm2(delta);
      norm += atoms[j].mass * norm2(rhs[j]);
      worst = std::max(worst, R(modulus(delta)));
    }
    const R denom = norm > 0 ? R(sqrt(norm)) : R(1);
    rep.residuals.push_back(to_double(R(sqrt(diff) / denom)));
    rep.max_atom_deviation.push_back(to_double(worst));
  }
  rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.passes = rep.max_residual <= tol;
  return rep;
}

}  // namespace csim
