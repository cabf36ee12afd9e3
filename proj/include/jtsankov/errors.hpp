#pragma once

#include <stdexcept>
#include <string>

namespace jts {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Division by zero, log of a non-positive value, singular matrices.
struct DomainError : Error {
  using Error::Error;
};

// Rational and float values met in one computation.
struct ModeError : Error {
  using Error::Error;
};

// A transcendental node reached in exact mode.
struct NotExactError : Error {
  using Error::Error;
};

struct DegenerateFormError : Error {
  using Error::Error;
};

struct ConstraintError : Error {
  using Error::Error;
};

struct HypothesisError : Error {
  using Error::Error;
};

struct ArityError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace jts
