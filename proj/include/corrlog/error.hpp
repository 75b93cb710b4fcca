#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlog {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside the domain of a function (|rho| >= 1, v_i <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The symmetric eigensolver did not converge.
class EigenSolverError : public Error {
 public:
  using Error::Error;
};

/// Dense n^2 x n^2 materialization refused; use the matrix-free apply() path.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Raised by sym_log and friends when an eigenvalue is not safely positive.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(std::size_t index, double eigenvalue, double threshold);

  std::size_t index() const noexcept { return index_; }
  double eigenvalue() const noexcept { return eigenvalue_; }
  double threshold() const noexcept { return threshold_; }

 private:
  std::size_t index_;
  double eigenvalue_;
  double threshold_;
};

enum class ViolationKind { NonFinite, Symmetry, Diagonal, Range, Definiteness };

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// A matrix failed correlation (or covariance) validation. Every violated
/// condition is listed; lambda_min is reported whenever it could be computed.
class ValidationError : public Error {
 public:
  ValidationError(std::vector<Violation> violations, double lambda_min);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  double lambda_min() const noexcept { return lambda_min_; }
  bool has(ViolationKind kind) const noexcept;

 private:
  std::vector<Violation> violations_;
  double lambda_min_;
};

/// Malformed text input. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace corrlog
