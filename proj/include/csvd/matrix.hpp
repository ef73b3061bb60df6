#pragma once

#include "csvd/types.hpp"

namespace csvd {

/// Checked matrix product; throws InvalidInputError naming both shapes on a
/// dimension mismatch.
ComplexDense matmul(const ComplexDense& a, const ComplexDense& b);

/// Conjugate transpose.
ComplexDense adjoint(const ComplexDense& a);

double frobenius_norm(const ComplexDense& a);

/// True iff a is square and ||a a* - I||_F <= tol. Non-square is false.
bool is_unitary(const ComplexDense& a, double tol = kExactAlgebraTol);

/// True iff a is square and ||a - a*||_F <= tol.
bool is_hermitian(const ComplexDense& a, double tol = kExactAlgebraTol);

/// Dense materialization of a rectangular diagonal matrix.
ComplexDense embed(const RectDiagonal& s);

bool all_finite(const ComplexDense& a);

namespace detail {
std::string shape_string(Index rows, Index cols);
void require_nonempty(const ComplexDense& a, const char* who);
void require_finite(const ComplexDense& a, const char* who);
}  // namespace detail

}  // namespace csvd
