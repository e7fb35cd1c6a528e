#ifndef QME_ERRORS_HPP
#define QME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qme {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pivot fell below the singularity threshold during LU factorization.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Power iteration exhausted its budget.
class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed matrix text, problem file, or command-line input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Which hypothesis of the M-matrix QME setting a pair (B, C) violates.
enum class ValidationReason {
  BNotNonsingularM,
  CNotM,
  BinvCNotNonneg,
  Cond3Fails,
  ATildeNotPositiveDiagonal,
  DimensionMismatch,
};

inline const char* to_string(ValidationReason r) {
  switch (r) {
    case ValidationReason::BNotNonsingularM: return "BNotNonsingularM";
    case ValidationReason::CNotM: return "CNotM";
    case ValidationReason::BinvCNotNonneg: return "BinvCNotNonneg";
    case ValidationReason::Cond3Fails: return "Cond3Fails";
    case ValidationReason::ATildeNotPositiveDiagonal: return "ATildeNotPositiveDiagonal";
    case ValidationReason::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

class ValidationError : public Error {
 public:
  ValidationError(ValidationReason reason, const std::string& detail)
      : Error(std::string("validation failed (") + to_string(reason) + "): " + detail),
        reason_(reason) {}

  ValidationReason reason() const noexcept { return reason_; }

 private:
  ValidationReason reason_;
};

}  // namespace qme

#endif  // QME_ERRORS_HPP
