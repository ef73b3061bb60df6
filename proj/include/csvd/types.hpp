#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace csvd {

using Complex = std::complex<double>;
using Index = Eigen::Index;

// Every dense matrix in the library uses this carrier; storage is row-major
// throughout so there is exactly one linearization convention.
using ComplexDense =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

/// Default tolerance for exact-algebra predicates (is_unitary, is_hermitian).
inline constexpr double kExactAlgebraTol = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operand violates a precondition: bad dimensions, non-finite entries,
// incompatible shapes, or a matrix without the required structure.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// The requested factorization does not exist for the given dimensions.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& message, std::vector<std::string> violations)
      : Error(message), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// sigma_B fell below the zero threshold; carries the offending 0-based index.
class SingularBError : public Error {
 public:
  SingularBError(const std::string& message, Index index)
      : Error(message), index_(index) {}

  Index index() const { return index_; }

 private:
  Index index_;
};

// Strict mode only: the pair admits no exact decomposition. Carries the
// unavoidable residual sqrt(sum_{i>p} sigma_A_i^2).
class NotDecomposableError : public Error {
 public:
  NotDecomposableError(const std::string& message, double residual)
      : Error(message), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// An iterative solver exceeded its sweep cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Parse failure in a matrix file; carries the 1-based line number.
class ParseError : public IoError {
 public:
  ParseError(const std::string& message, long line)
      : IoError(message), line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// Rectangular diagonal matrix: the only nonzero entries sit at (i,i) for
// i < min(rows, cols), and the stored diagonal is real and nonnegative.
struct RectDiagonal {
  Index rows = 0;
  Index cols = 0;
  RealVector diag;
};

/// Validating constructor; diag must hold min(rows, cols) nonnegative values.
RectDiagonal make_rect_diagonal(Index rows, Index cols, RealVector diag);

}  // namespace csvd
