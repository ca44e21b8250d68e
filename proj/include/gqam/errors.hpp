#pragma once

#include <stdexcept>
#include <string>

namespace gqam {

// Base class for every error the library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Function-spec text that does not follow the file format.
struct MalformedSpec : Error {
  using Error::Error;
};

// Structurally well-formed input that violates a stated invariant.
// The message names the invariant and the location.
struct InvariantViolation : Error {
  using Error::Error;
};

// Argument outside the function's interval or outside conv(f(I)).
struct OutOfDomain : Error {
  using Error::Error;
};

struct EmptyVector : Error {
  using Error::Error;
};

// Negative weight or all-zero weight vector.
struct WeightViolation : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

// reduce_from_n with m >= n.
struct BadArity : Error {
  using Error::Error;
};

// Two-function operation on functions with different intervals.
struct DomainMismatch : Error {
  using Error::Error;
};

// A claimed comparison witness that fails re-verification; indicates an
// internal soundness bug, never a user error.
struct NotAWitness : Error {
  using Error::Error;
};

struct BadParameters : Error {
  using Error::Error;
};

}  // namespace gqam
