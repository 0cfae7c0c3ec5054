#pragma once

#include <stdexcept>
#include <string>

namespace mmlr {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shapes do not conform (construction, multiply, solve, sketch apply).
struct DimensionError : Error {
  using Error::Error;
};

// A non-finite entry reached a constructor or parser.
struct InvalidValue : Error {
  using Error::Error;
};

// A matrix required to have full column rank does not.
struct RankDeficient : Error {
  using Error::Error;
};

// Schatten order outside [1, inf].
struct InvalidOrder : Error {
  using Error::Error;
};

// An iterative factorization failed to converge.
struct ConvergenceFailure : Error {
  using Error::Error;
};

// Sampling weights are not a positive probability vector.
struct InvalidWeights : Error {
  using Error::Error;
};

// rank(SA) < rank(A) where rank preservation is required.
struct RankNotPreserved : Error {
  using Error::Error;
};

// Principal angles requested against a zero-dimensional subspace.
struct EmptySubspace : Error {
  using Error::Error;
};

// A bound evaluation was requested outside its hypotheses.
struct NotApplicableError : Error {
  using Error::Error;
};

// Invalid experiment configuration; message names the offending field.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input file; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

// File could not be opened or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mmlr
