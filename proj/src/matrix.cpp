#include "csvd/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace csvd {

namespace detail {

std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_nonempty(const ComplexDense& a, const char* who) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw InvalidInputError(std::string(who) +
                            ": matrix dimensions must be positive, got " +
                            shape_string(a.rows(), a.cols()));
  }
}

void require_finite(const ComplexDense& a, const char* who) {
  if (!all_finite(a)) {
    throw InvalidInputError(std::string(who) + ": input has non-finite entries");
  }
}

}  // namespace detail

RectDiagonal make_rect_diagonal(Index rows, Index cols, RealVector diag) {
  if (rows < 1 || cols < 1) {
    throw InvalidInputError("rect_diagonal: dimensions must be positive, got " +
                            detail::shape_string(rows, cols));
  }
  const Index want = std::min(rows, cols);
  if (diag.size() != want) {
    throw InvalidInputError("rect_diagonal: need min(rows, cols) = " +
                            std::to_string(want) + " diagonal entries, got " +
                            std::to_string(diag.size()));
  }
  for (Index i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i]) || diag[i] < 0.0) {
      throw InvalidInputError(
          "rect_diagonal: diagonal entries must be finite and nonnegative, "
          "entry " +
          std::to_string(i) + " is " + std::to_string(diag[i]));
    }
  }
  return RectDiagonal{rows, cols, std::move(diag)};
}

ComplexDense matmul(const ComplexDense& a, const ComplexDense& b) {
  detail::require_nonempty(a, "matmul");
  detail::require_nonempty(b, "matmul");
  if (a.cols() != b.rows()) {
    throw InvalidInputError("matmul: dimension mismatch, " +
                            detail::shape_string(a.rows(), a.cols()) +
                            " times " +
                            detail::shape_string(b.rows(), b.cols()));
  }
  return a * b;
}

ComplexDense adjoint(const ComplexDense& a) {
  detail::require_nonempty(a, "adjoint");
  return a.adjoint();
}

double frobenius_norm(const ComplexDense& a) {
  detail::require_nonempty(a, "frobenius_norm");
  return a.norm();
}

bool is_unitary(const ComplexDense& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) return false;
  const Index n = a.rows();
  ComplexDense gram = a * a.adjoint();
  gram -= ComplexDense::Identity(n, n);
  return gram.norm() <= tol;
}

bool is_hermitian(const ComplexDense& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) return false;
  ComplexDense diff = a - a.adjoint();
  return diff.norm() <= tol;
}

ComplexDense embed(const RectDiagonal& s) {
  if (s.rows < 1 || s.cols < 1 || s.diag.size() != std::min(s.rows, s.cols)) {
    throw InvalidInputError("embed: malformed rect diagonal, " +
                            detail::shape_string(s.rows, s.cols) + " with " +
                            std::to_string(s.diag.size()) + " diagonal entries");
  }
  ComplexDense out = ComplexDense::Zero(s.rows, s.cols);
  for (Index i = 0; i < s.diag.size(); ++i) out(i, i) = s.diag[i];
  return out;
}

bool all_finite(const ComplexDense& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const Complex& z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

}  // namespace csvd
