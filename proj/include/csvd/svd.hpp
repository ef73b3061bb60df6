#pragma once

#include "csvd/matrix.hpp"

namespace csvd {

// Full SVD a = u * embed(sigma) * adjoint(v) with square unitary u (m x m)
// and v (n x n); sigma.diag is sorted descending.
struct SvdFactors {
  ComplexDense u;
  RectDiagonal sigma;
  ComplexDense v;
};

// Eigendecomposition a = u * diag(lambda) * adjoint(u) of a Hermitian
// positive-semidefinite matrix; lambda sorted descending.
struct HermitianEig {
  ComplexDense u;
  RealVector lambda;
};

/// Full SVD by one-sided Jacobi on the taller orientation (the adjoint is
/// factored when m < n). Deterministic conventions: singular values sorted
/// descending with exact ties broken by column index, and each factor column
/// phased so the largest-magnitude entry of the left singular vector is real
/// positive. Null-space columns of u are completed to an orthonormal basis.
SvdFactors full_svd(const ComplexDense& a);

/// Hermitian eigendecomposition by two-sided Jacobi, restricted to
/// positive-semidefinite input: eigenvalues in [-tol*||a||, 0) are clamped to
/// zero, anything below that raises "not positive semidefinite".
HermitianEig hermitian_psd_eig(const ComplexDense& a, double tol = kExactAlgebraTol);

/// u * embed(sigma) * adjoint(v).
ComplexDense reconstruct(const SvdFactors& f);

}  // namespace csvd
