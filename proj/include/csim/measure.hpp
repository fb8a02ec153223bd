#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "csim/errors.hpp"
#include "csim/scalar.hpp"

namespace csim {

template <class C>
struct Atom {
  C z;
  real_of<C> mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely atomic positive measure on the complex plane.
///
/// Atoms are kept in insertion order; that order is the indexing used by every
/// "values at atoms" vector in the library. Masses are strictly positive and
/// locations pairwise distinct.
template <class C = hp_complex>
class AtomicMeasure {
 public:
  using complex_type = C;
  using real_type = real_of<C>;

  AtomicMeasure() = default;

  explicit AtomicMeasure(std::vector<Atom<C>> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InputError("atomic measure needs at least one atom");
    for (const auto& a : atoms_) {
      if (!is_finite_complex(a.z) || !is_finite(a.mass)) throw InputError("atomic measure has a non-finite atom");
      if (!(a.mass > 0)) throw InputError("atomic measure has a non-positive mass");
    }
    std::vector<const C*> order;
    order.reserve(atoms_.size());
    for (const auto& a : atoms_) order.push_back(&a.z);
    std::sort(order.begin(), order.end(), [](const C* x, const C* y) {
      return x->real() < y->real() || (x->real() == y->real() && x->imag() < y->imag());
    });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (*order[i] == *order[i - 1]) throw InputError("atomic measure has two atoms at the same location");
  }

  std::span<const Atom<C>> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  real_type total_mass() const {
    real_type t = 0;
    for (const auto& a : atoms_) t += a.mass;
    return t;
  }

  real_type max_modulus() const {
    real_type r = 0;
    for (const auto& a : atoms_) r = std::max(r, real_type(modulus(a.z)));
    return r;
  }

  /// k-th power moment, sum m_j z_j^k.
  C moment(std::size_t k) const {
    C s(0);
    for (const auto& a : atoms_) {
      C p(1);
      for (std::size_t i = 0; i < k; ++i) p *= a.z;
      s += a.mass * p;
    }
    return s;
  }

  /// Moments 0..k_max in one pass.
  std::vector<C> moments(std::size_t k_max) const {
    std::vector<C> s(k_max + 1, C(0));
    for (const auto& a : atoms_) {
      C p(1);
      for (std::size_t k = 0; k <= k_max; ++k) {
        s[k] += a.mass * p;
        p *= a.z;
      }
    }
    return s;
  }

  template <class F>
  std::vector<C> evaluate(F&& f) const {
    std::vector<C> v;
    v.reserve(atoms_.size());
    for (const auto& a : atoms_) v.push_back(C(f(a.z)));
    return v;
  }

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<Atom<C>> atoms_;
};

namespace detail {
template <class C>
void check_sizes(std::span<const C> f, std::span<const C> g, std::size_t n) {
  if (f.size() != n || g.size() != n) throw InputError("function values do not match the atom count");
}
}  // namespace detail

/// Sesquilinear L^2_mu inner product, sum m_j f(z_j) conj(g(z_j)), on values at atoms.
template <class C>
C inner_l2mu(std::span<const std::type_identity_t<C>> f, std::span<const std::type_identity_t<C>> g,
             const AtomicMeasure<C>& mu) {
  detail::check_sizes<C>(f, g, mu.size());
  C s(0);
  const auto atoms = mu.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) s += atoms[j].mass * f[j] * conjugate(g[j]);
  return s;
}

/// Bilinear moment pairing, sum m_j f(z_j) g(z_j). No conjugation.
template <class C>
C bilinear_moment(std::span<const std::type_identity_t<C>> f, std::span<const std::type_identity_t<C>> g,
                  const AtomicMeasure<C>& mu) {
  detail::check_sizes<C>(f, g, mu.size());
  C s(0);
  const auto atoms = mu.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) s += atoms[j].mass * f[j] * g[j];
  return s;
}

template <class C, class F, class G>
  requires std::invocable<F, const C&> && std::invocable<G, const C&>
C inner_l2mu(F&& f, G&& g, const AtomicMeasure<C>& mu) {
  const auto fv = mu.evaluate(f);
  const auto gv = mu.evaluate(g);
  return inner_l2mu<C>(std::span<const C>(fv), std::span<const C>(gv), mu);
}

template <class C, class F, class G>
  requires std::invocable<F, const C&> && std::invocable<G, const C&>
C bilinear_moment(F&& f, G&& g, const AtomicMeasure<C>& mu) {
  const auto fv = mu.evaluate(f);
  const auto gv = mu.evaluate(g);
  return bilinear_moment<C>(std::span<const C>(fv), std::span<const C>(gv), mu);
}

template <class C>
AtomicMeasure<cplx> to_double_measure(const AtomicMeasure<C>& mu) {
  std::vector<Atom<cplx>> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({to_cplx(a.z), to_double(a.mass)});
  return AtomicMeasure<cplx>(std::move(atoms));
}

template <class C>
AtomicMeasure<C> from_double_measure(const AtomicMeasure<cplx>& mu) {
  std::vector<Atom<C>> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({from_cplx<C>(a.z), real_of<C>(a.mass)});
  return AtomicMeasure<C>(std::move(atoms));
}

}  // namespace csim
