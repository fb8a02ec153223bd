#pragma once

#include <stdexcept>
#include <string>

namespace csim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad dimensions, schema violations).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of an operation does not hold for its input.
enum class Hypothesis {
  class_membership,      // matrix is not tridiagonal complex symmetric with nonzero off-diagonal
  j_symmetry,            // JAJ != A*
  fixed_by_conjugation,  // J x0 != x0
  cyclicity,             // x0 is not a cyclic vector
  gram_condition,        // some Gram determinant Gamma_n is not zero
  positive_mass,         // s_0 <= 0
  admissible_radius,     // circle too small for the prescribed moment
};

inline const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::class_membership: return "class_membership";
    case Hypothesis::j_symmetry: return "j_symmetry";
    case Hypothesis::fixed_by_conjugation: return "fixed_by_conjugation";
    case Hypothesis::cyclicity: return "cyclicity";
    case Hypothesis::gram_condition: return "gram_condition";
    case Hypothesis::positive_mass: return "positive_mass";
    case Hypothesis::admissible_radius: return "admissible_radius";
  }
  return "unknown";
}

class PreconditionError : public Error {
 public:
  PreconditionError(Hypothesis which, const std::string& what)
      : Error(what), which_(which) {}

  Hypothesis hypothesis() const noexcept { return which_; }

 private:
  Hypothesis which_;
};

/// A numerical result failed its own post-condition check.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace csim
