#pragma once

#include <stdexcept>
#include <string>

namespace fidest {

// Error taxonomy. The CLI maps NonCommuting to exit code 2 and every other
// kind to exit code 1, so keep the distinction intact when wrapping errors.
enum class ErrorKind {
  InvalidArgument,   // bad config value, flag, or parameter
  ParseError,        // malformed matrix/report text
  IoError,           // file open/read/write failure
  DimensionMismatch, // operands of incompatible shape
  InvalidState,      // violated state invariant (hermiticity, trace, PSD, unitarity)
  NonCommuting,      // inputs fail the commutation tolerance
  ModeMismatch,      // value inconsistent with the requested mode (e.g. V < 1 in truncated recovery)
  NumericalFailure,  // backend failure (eigensolver did not converge)
};

class FidestError : public std::runtime_error {
public:
  FidestError(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Raised when a pair of states fails the commutation check; carries the
// measured max-entry norm of the commutator so callers can report it.
class NonCommutingError : public FidestError {
public:
  NonCommutingError(double norm, double tol, const std::string& msg)
      : FidestError(ErrorKind::NonCommuting, msg), norm_(norm), tol_(tol) {}

  double norm() const noexcept { return norm_; }
  double tolerance() const noexcept { return tol_; }

private:
  double norm_;
  double tol_;
};

} // namespace fidest
