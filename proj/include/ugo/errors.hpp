#pragma once

#include <stdexcept>
#include <string>

namespace ugo {

/// Process exit codes used by the `ugo` tool.
enum class ExitCode : int {
  success = 0,
  usage = 1,
  invalid_discriminant = 2,
  overflow = 3,
  verification_failure = 4,
};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::usage; }
};

/// Input outside the supported integer range (|x| > 2^62 and friends).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed mathematical object: not a discriminant, imprimitive form, ...
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::invalid_discriminant; }
};

/// Exact arithmetic left the 128-bit intermediate range.
class OverflowError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::overflow; }
};

/// Two independent computations disagreed. Always a bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::verification_failure; }
};

}  // namespace ugo
