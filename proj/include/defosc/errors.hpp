#pragma once

#include <stdexcept>
#include <string>

namespace defosc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A family parameter lies outside its admissible range (e.g. Laguerre alpha <= -1).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// A denominator of a q-formula vanishes at the requested index.
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

/// A_{n-1} C_n < 0: the recurrence has no real orthonormal (Jacobi) form.
class NonPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Some b_k vanishes, so the generalized factorial (and |z>) stops at that level.
class ZeroCoefficientError : public Error {
 public:
  using Error::Error;
};

class InsufficientTruncationError : public Error {
 public:
  InsufficientTruncationError(const std::string& what, int suggested_dim)
      : Error(what), suggested_dim_(suggested_dim) {}

  /// Smallest dimension meeting the requested tail tolerance, or -1 if none was found.
  int suggested_dim() const noexcept { return suggested_dim_; }

 private:
  int suggested_dim_;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class InsufficientMomentsError : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes disagree beyond their tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace defosc
