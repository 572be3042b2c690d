#pragma once

#include <stdexcept>
#include <string>

namespace sgpipe {

// Argument outside the mathematical domain of an operation (Y/K at z = 0,
// epsilon = 0 where a positive value is required, singular denominators).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Index outside the supported table range (Bessel zeros, azimuthal orders).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A result magnitude that does not fit in a double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Root bracketing, quadrature or iteration failed to converge.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank-deficient boundary systems, vanishing denominators, and other
// situations where the answer would have to be guessed.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgpipe
