#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an input value failed (non-Hermitian input, negative
/// spectrum, non-unital Kraus family, ...). Carries the offending residual.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// An input system failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An identity that must hold by construction did not. Always a bug or a
/// numerically pathological input, never a mathematical verdict.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcs
