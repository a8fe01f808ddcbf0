#pragma once

#include <stdexcept>
#include <string>

namespace haarint {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed arguments: bad partitions, mismatched ground sets, odd inputs
// where even ones are required, and so on.
struct InvalidInputError : Error {
  using Error::Error;
};

// Evaluation of a rational function at a genuine pole.
struct PoleError : Error {
  using Error::Error;
};

// Linear system is singular over the rational-function field.
struct SingularSystemError : Error {
  using Error::Error;
};

// A concrete dimension makes a Weingarten system singular, or violates a
// measure constraint (odd symplectic dimension, Stiefel width > dim, ...).
struct DimensionError : Error {
  using Error::Error;
};

// A t-design was queried beyond its design order.
struct DesignOrderError : Error {
  using Error::Error;
};

// Polynomial degree exceeds the configured engine guard.
struct DegreeLimitError : Error {
  using Error::Error;
};

// Result is a step function of the dimension, not a rational function
// (pure trace moments with symbolic d).
struct NotRationalError : Error {
  using Error::Error;
};

// Expression cannot be brought to an integrable polynomial form.
struct UnsupportedFormError : Error {
  using Error::Error;
};

// Expression/measure mismatch at dispatch time.
struct DispatchError : Error {
  using Error::Error;
};

// Syntax error with position information.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos, std::string expected = {})
      : Error(msg + " at position " + std::to_string(pos) +
              (expected.empty() ? "" : " (expected " + expected + ")")),
        position(pos),
        hint(std::move(expected)) {}
  std::size_t position;
  std::string hint;
};

// HCIZ with coinciding symbolic eigenvalues.
struct DegenerateSpectrumError : Error {
  using Error::Error;
};

}  // namespace haarint
