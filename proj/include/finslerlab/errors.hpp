#pragma once

#include <stdexcept>
#include <string>

namespace finslerlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller supplied malformed input: dimension mismatch, zero direction, bad file.
struct InputError : Error {
  using Error::Error;
};

/// Spec file could not be read; carries the offending line (0 if unknown) and field path.
struct ParseError : InputError {
  ParseError(const std::string& what, std::size_t line_no, std::string field_path)
      : InputError(what), line(line_no), field(std::move(field_path)) {}
  std::size_t line;
  std::string field;
};

/// Base for failures of the numerics on otherwise well-formed input.
struct NumericalError : Error {
  using Error::Error;
};

/// Evaluation hit the singular set of the metric (Kropina at s = 0 / beta = 0).
struct SingularityError : NumericalError {
  using NumericalError::NumericalError;
};

/// A denominator of the (alpha, beta) calculus vanished.
struct DegenerateMetricError : NumericalError {
  using NumericalError::NumericalError;
};

/// Argument outside the real domain of the family (e.g. s < 0 with fractional m).
struct DomainError : NumericalError {
  using NumericalError::NumericalError;
};

struct DivergenceError : NumericalError {
  using NumericalError::NumericalError;
};

/// Finite-difference stencil could not be kept inside the regular domain.
struct StencilError : NumericalError {
  using NumericalError::NumericalError;
};

struct ClassificationError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace finslerlab
