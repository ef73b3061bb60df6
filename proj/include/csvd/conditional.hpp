#pragma once

#include <optional>

#include "csvd/svd.hpp"

namespace csvd {

// Which feasibility condition a dimension tuple falls under. k = l satisfies
// both; it is reported as Condition1 (the constructions coincide there).
enum class Case { kCondition1, kCondition2, kInfeasible };

const char* case_name(Case c);

// Classification of (m, n, k, l) against the two dimension conditions,
// ignoring the spectrum of B. Empty when neither holds.
std::optional<Case> dimension_case(Index m, Index n, Index k, Index l);

struct FeasibilityReport {
  Case condition = Case::kInfeasible;
  Index p = 0;  // min(k, l)
  std::array<Index, 4> dims{};  // m, n, k, l
  std::vector<std::string> violations;
  double sigma_b_min = 0.0;  // smallest of the first p singular values of B
};

// The scaling construction linking the two spectra: sigma_A = R sigma_B S*.
struct ScalingFactors {
  RealVector d;         // p entries, d_i = sqrt(sigma_A_i / sigma_B_i)
  RectDiagonal r;       // m x k, d on the leading diagonal
  RectDiagonal s_adj;   // l x n, stores S* (same leading diagonal)
  Case condition = Case::kInfeasible;
};

struct ConditionalFactors {
  ComplexDense h;       // m x k
  ComplexDense m;       // n x l
  double residual_abs = 0.0;  // ||a - h b m*||_F recomputed from the factors
  double residual_rel = 0.0;
  bool exact = false;
  FeasibilityReport report;
  ScalingFactors scaling;
};

struct SpecialFactors {
  ComplexDense h;  // n x n
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  bool exact = false;
};

struct VerifyReport {
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  bool hh_hermitian = false;
  bool mm_hermitian = false;
  bool pass = false;
};

struct DecomposeOptions {
  double zero_tol = 1e-12;  // relative threshold deciding "nonzero" sigma_B
  double exact_tol = 1e-8;  // relative residual below which exact = true
  bool strict = false;      // error out instead of returning inexact factors
};

/// Classifies the tuple and the spectrum of B. sigma_b must hold the
/// min(k, l) leading singular values of B, descending. Infeasibility is a
/// value here, not an error.
FeasibilityReport check_conditions(Index m, Index n, Index k, Index l,
                                   const RealVector& sigma_b,
                                   double zero_tol = 1e-12);

/// d_i = sqrt(sigma_a_i / sigma_b_i) for i < p. Throws SingularBError when
/// some sigma_b_i is at or below the zero threshold.
RealVector scaling_diagonal(const RealVector& sigma_a, const RealVector& sigma_b,
                            Index p, double zero_tol = 1e-12);

/// Assembles R (m x k) and S* (l x n) with d on their leading diagonals.
ScalingFactors build_scaling(const RealVector& d, Index m, Index n, Index k,
                             Index l, Case condition);

/// Full scaling decomposition between two rectangular diagonal spectra:
/// check_conditions + scaling_diagonal + build_scaling.
ScalingFactors sigma_decompose(const RectDiagonal& sigma_a,
                               const RectDiagonal& sigma_b,
                               double zero_tol = 1e-12);

/// sqrt(sum_{i >= p} sigma_a_i^2): the part of the spectrum of A the
/// construction cannot reproduce, and exactly the Frobenius residual of the
/// returned factors.
double residual_tail(const RealVector& sigma_a, Index p);

/// The conditional decomposition a = h b m*: h = U_A R U_B*, m = V_A S V_B*.
ConditionalFactors conditional_svd(const ComplexDense& a, const ComplexDense& b,
                                   const DecomposeOptions& opts = {});

/// Square special case a = h b h* for Hermitian PSD a and b with b positive
/// definite: h = U_A diag(sqrt(lambda_A_i / lambda_B_i)) U_B*.
SpecialFactors special_case(const ComplexDense& a, const ComplexDense& b,
                            const DecomposeOptions& opts = {});

/// Standalone check of externally supplied factors against a = h b m*.
VerifyReport verify_factors(const ComplexDense& a, const ComplexDense& b,
                            const ComplexDense& h, const ComplexDense& m,
                            double tol = 1e-8);

}  // namespace csvd
