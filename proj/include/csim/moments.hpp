#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "csim/classify.hpp"
#include "csim/core.hpp"
#include "csim/measure.hpp"

namespace csim {

/// Prescribed moments s_0..s_rho, rho >= 1, with s_0 real and positive.
template <class C = hp_complex>
class MomentSequence {
 public:
  using complex_type = C;

  MomentSequence() = default;

  explicit MomentSequence(std::vector<C> s) : s_(std::move(s)) {
    if (s_.size() < 2) throw InputError("moment sequence needs s_0 and s_1 (rho >= 1)");
    for (const auto& v : s_)
      if (!is_finite_complex(v)) throw InputError("moment sequence has a non-finite value");
    if (s_[0].imag() != 0 || !(s_[0].real() > 0))
      throw PreconditionError(Hypothesis::positive_mass, "s_0 must be real and positive");
  }

  std::size_t rho() const noexcept { return s_.size() - 1; }
  const std::vector<C>& values() const noexcept { return s_; }
  const C& operator[](std::size_t k) const { return s_.at(k); }
  real_of<C> s0() const { return s_[0].real(); }

  friend bool operator==(const MomentSequence&, const MomentSequence&) = default;

 private:
  std::vector<C> s_;
};

/// Semi-infinite tridiagonal extension truncated to `size` rows: original
/// entries inside the base block, diagonal 0 and off-diagonal 1 beyond it.
class ExtendedJacobi {
 public:
  ExtendedJacobi(Tridiagonal base, std::size_t size) : base_(std::move(base)), size_(size) {
    if (size_ < base_.dim()) throw InputError("extension size must be at least the base dimension");
  }

  const Tridiagonal& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return size_; }

  cplx diag(std::size_t k) const { return k < base_.dim() ? base_.diag[k] : cplx(0.0); }
  cplx offdiag(std::size_t k) const { return k + 1 < base_.dim() ? base_.offdiag[k] : cplx(1.0); }

  std::vector<cplx> diagonal() const {
    std::vector<cplx> v(size_);
    for (std::size_t k = 0; k < size_; ++k) v[k] = diag(k);
    return v;
  }

  std::vector<cplx> off_diagonal() const {
    std::vector<cplx> v(size_ - 1);
    for (std::size_t k = 0; k + 1 < size_; ++k) v[k] = offdiag(k);
    return v;
  }

  CMatrix dense() const {
    const auto n = static_cast<Eigen::Index>(size_);
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = diag(static_cast<std::size_t>(k));
    for (Eigen::Index k = 0; k + 1 < n; ++k) m(k, k + 1) = m(k + 1, k) = offdiag(static_cast<std::size_t>(k));
    return m;
  }

 private:
  Tridiagonal base_;
  std::size_t size_;
};

inline ExtendedJacobi extend_matrix(const Tridiagonal& m, std::size_t size) { return ExtendedJacobi(m, size); }

/// s_k = S(lambda^k) for k = 0..rho: the p_0-coefficient of lambda^k expanded
/// in the recurrence polynomials. Propagates c_{k+1} = J c_k on the truncated
/// extension starting from c_0 = e_0, so s_k = (J^k)_{00} with no conjugation.
/// `truncation` defaults to rho + 2; any larger value gives identical output.
template <class C = hp_complex>
MomentSequence<C> spectral_moments(const Tridiagonal& m, std::size_t rho, std::size_t truncation = 0,
                                   double eps = 1e-9) {
  require_class_member(m, eps);
  if (rho < 1) throw InputError("rho must be at least 1");
  if (truncation == 0) truncation = rho + 2;
  const auto ext = extend_matrix(m, std::max(truncation, m.dim()));
  const std::size_t n = ext.size();
  std::vector<C> b(n), a(n - 1);
  for (std::size_t k = 0; k < n; ++k) b[k] = from_cplx<C>(ext.diag(k));
  for (std::size_t k = 0; k + 1 < n; ++k) a[k] = from_cplx<C>(ext.offdiag(k));

  std::vector<C> c(n, C(0)), next(n, C(0));
  c[0] = C(1);
  std::vector<C> s;
  s.reserve(rho + 1);
  for (std::size_t k = 0; k <= rho; ++k) {
    s.push_back(c[0]);
    // Support of c_k is {0..k}; stop one past it.
    const std::size_t top = std::min(n, k + 2);
    for (std::size_t i = 0; i < top; ++i) {
      C v = b[i] * c[i];
      if (i + 1 < n) v += a[i] * c[i + 1];
      if (i > 0) v += a[i - 1] * c[i - 1];
      next[i] = v;
    }
    std::swap(c, next);
  }
  return MomentSequence<C>(std::move(s));
}

/// One atom at s1/s0 with mass s0.
template <class C = hp_complex>
AtomicMeasure<C> solve_rho1(const real_of<C>& s0, const C& s1) {
  if (!(s0 > 0)) throw PreconditionError(Hypothesis::positive_mass, "s_0 must be positive");
  return AtomicMeasure<C>({Atom<C>{s1 / s0, s0}});
}

/// Determinant 1 - |c~|^2 of the Toeplitz matrix of the trigonometric moments
/// (1, 0, ..., 0, c~); positive iff the embedded trigonometric problem is
/// strictly solvable.
template <class C>
real_of<C> toeplitz_solvability(const C& ctilde, std::size_t rho = 2) {
  if (rho < 1) throw InputError("toeplitz_solvability needs rho >= 1");
  return real_of<C>(1) - norm2(ctilde);
}

struct RadiusSchedule {
  double gamma = 1.5;   // growth factor between consecutive circles
  double delta = 1e-3;  // margin: |c~| <= 1/2 - delta keeps every mass >= 2 delta s0 / N
};

template <class C>
struct CircleSolution {
  real_of<C> radius;
  std::size_t order;  // n: the only nonzero moment besides s_0 is the n-th
  C target;           // prescribed n-th moment c
  real_of<C> s0;
  std::vector<Atom<C>> atoms;

  C ctilde() const { return target / (s0 * power(radius, order)); }

  static real_of<C> power(const real_of<C>& r, std::size_t n) {
    real_of<C> p(1);
    for (std::size_t i = 0; i < n; ++i) p *= r;
    return p;
  }
};

/// Smallest radius r with |c / s0| / r^n <= 1/2 - delta.
template <class C>
real_of<C> min_gap_radius(const real_of<C>& s0, const C& c, std::size_t n, double delta) {
  using std::pow;
  using R = real_of<C>;
  const R ratio = modulus(c) / (s0 * (R(0.5) - R(delta)));
  if (ratio == 0) return R(0);
  return pow(ratio, R(1) / R(n));
}

/// Measure with moments (s0, 0, ..., 0, c) of orders 0..n, supported on the
/// circle |z| = r. Samples the density s0 (1 + 2 Re(conj(c~) w^n)) at the
/// N = 2n + 1 roots of unity w; N > 2n keeps the w^{+-n} terms from aliasing
/// onto any order 1..n-1.
template <class C = hp_complex>
CircleSolution<C> solve_gap_moments(const real_of<C>& s0, const C& c, std::size_t n, const real_of<C>& r,
                                    double delta = 1e-3) {
  using R = real_of<C>;
  if (!(s0 > 0)) throw PreconditionError(Hypothesis::positive_mass, "s_0 must be positive");
  if (n < 2) throw InputError("gap moment order must be at least 2");
  if (!(r > 0)) throw InputError("circle radius must be positive");
  // delta = 0 admits the boundary |c~| = 1/2, where masses may reach zero.
  if (!(delta >= 0 && delta < 0.5)) throw InputError("delta must lie in [0, 1/2)");
  const R rmin = min_gap_radius<C>(s0, c, n, delta);
  if (r < rmin)
    throw PreconditionError(Hypothesis::admissible_radius,
                            "radius too small for the prescribed moment; need r >= " +
                                std::to_string(to_double(rmin)));

  CircleSolution<C> out{r, n, c, s0, {}};
  const C ct = out.ctilde();
  const C ct_conj = conjugate(ct);
  const std::size_t count = 2 * n + 1;
  const R two_pi = 2 * pi<R>();
  const R base_mass = s0 / R(count);
  out.atoms.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const C w = make_polar<C>(R(1), two_pi * R(j) / R(count));
    const C wn = make_polar<C>(R(1), two_pi * R((j * n) % count) / R(count));
    const R density = 1 + 2 * (ct_conj * wn).real();
    out.atoms.push_back(Atom<C>{r * w, base_mass * density});
  }
  return out;
}

/// Radius of a stand-alone gap gadget: admissible and at least 1.
template <class C>
real_of<C> scheduled_radius(const real_of<C>& s0, const C& c, std::size_t n, double delta) {
  return std::max(min_gap_radius<C>(s0, c, n, delta), real_of<C>(1));
}

template <class C>
struct MomentSolution {
  AtomicMeasure<C> measure;
  Atom<C> first;  // step 1: atom at rho s_1 / s_0 with mass s_0 / rho
  std::vector<CircleSolution<C>> circles;  // steps 2..rho
};

/// Finitely atomic solution of the truncated moment problem for s_0..s_rho.
///
/// Step 1 places mass s_0/rho at rho s_1/s_0. Step n = 2..rho adds a circle
/// gadget of mass s_0/rho carrying the residual n-th moment left by the
/// earlier steps, on a radius beyond every earlier circle. The union matches
/// all prescribed moments.
template <class C = hp_complex>
MomentSolution<C> algorithm1(const MomentSequence<C>& s, const RadiusSchedule& schedule = {}) {
  using R = real_of<C>;
  using std::pow;
  const std::size_t rho = s.rho();
  if (rho < 2) throw InputError("algorithm1 needs rho >= 2; use solve_rho1 for rho = 1");
  if (!(schedule.gamma > 1.0)) throw InputError("radius growth factor gamma must exceed 1");
  if (!(schedule.delta > 0.0 && schedule.delta < 0.5)) throw InputError("delta must lie in (0, 1/2)");

  const R s0 = s.s0();
  const R step_mass = s0 / R(rho);
  const auto first_measure = solve_rho1<C>(step_mass, s[1]);
  const Atom<C> first = first_measure.atoms()[0];

  std::vector<Atom<C>> atoms{first};
  // Running power sums of the atoms placed so far, advanced one order per step.
  std::vector<C> powers{first.z};
  const R first_modulus = modulus(first.z);
  R previous = first_modulus > 0 ? first_modulus : R(1);
  const R gamma(schedule.gamma);

  MomentSolution<C> out;
  out.first = first;
  for (std::size_t n = 2; n <= rho; ++n) {
    C placed(0);
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      powers[j] *= atoms[j].z;
      placed += atoms[j].mass * powers[j];
    }
    const C c = s[n] - placed;
    R r = std::max({min_gap_radius<C>(step_mass, c, n, schedule.delta), gamma * previous, gamma * first_modulus, R(1)});
    auto circle = solve_gap_moments<C>(step_mass, c, n, r, schedule.delta);

    const R floor = R(schedule.delta) * s0 / (R(rho) * R(2 * n + 1));
    for (const auto& a : circle.atoms) {
      if (!(a.mass >= floor)) throw ConsistencyError("circle gadget produced a mass below the positivity floor");
      atoms.push_back(a);
      // Powers z^n for the new atoms.
      C p(1);
      for (std::size_t i = 0; i < n; ++i) p *= a.z;
      powers.push_back(p);
    }
    previous = r;
    out.circles.push_back(std::move(circle));
  }

  // Circles strictly nested and away from the step-1 atom.
  const R sep(1e-6);
  R last = first_modulus;
  for (const auto& c : out.circles) {
    if (!(c.radius - last > sep * c.radius))
      throw ConsistencyError("radius schedule produced overlapping circles");
    last = c.radius;
  }
  out.measure = AtomicMeasure<C>(std::move(atoms));
  return out;
}

/// residual_k = |sum m_j z_j^k - s_k| / max(1, |s_k|, max_j |z_j|^k * total mass).
template <class C>
std::vector<double> verify_measure(const AtomicMeasure<C>& mu, const MomentSequence<C>& s) {
  using R = real_of<C>;
  const std::size_t rho = s.rho();
  const auto got = mu.moments(rho);
  const R rmax = mu.max_modulus();
  const R total = mu.total_mass();
  std::vector<double> res;
  res.reserve(rho + 1);
  R rk(1);
  for (std::size_t k = 0; k <= rho; ++k) {
    const R scale = std::max({R(1), R(modulus(s[k])), rk * total});
    res.push_back(to_double(R(modulus(C(got[k] - s[k]))) / scale));
    rk *= rmax;
  }
  return res;
}

inline double max_residual(const std::vector<double>& residuals) {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

}  // namespace csim
