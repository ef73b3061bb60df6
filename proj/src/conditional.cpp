#include "csvd/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace csvd {

namespace {

std::string dims_string(Index m, Index n, Index k, Index l) {
  std::ostringstream os;
  os << "(m,n,k,l) = (" << m << "," << n << "," << k << "," << l << ")";
  return os.str();
}

// Ordering is a convention of the SVD engine, not a requirement here (the
// scaling diagonal d is genuinely non-monotonic), so only sign and
// finiteness are enforced.
void require_spectrum(const RealVector& s, const char* who) {
  for (Index i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || s[i] < 0.0) {
      throw InvalidInputError(std::string(who) +
                              ": spectrum entries must be finite and "
                              "nonnegative, entry " +
                              std::to_string(i) + " is " + std::to_string(s[i]));
    }
  }
}

// "Non-zero" threshold for sigma_B: relative to the largest value, with an
// absolute fallback when the whole spectrum is zero.
double zero_threshold(const RealVector& sigma_b, double zero_tol) {
  if (sigma_b.size() > 0 && sigma_b[0] > 0.0) return zero_tol * sigma_b[0];
  return zero_tol;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += "; ";
    out += parts[i];
  }
  return out;
}

}  // namespace

const char* case_name(Case c) {
  switch (c) {
    case Case::kCondition1:
      return "condition1";
    case Case::kCondition2:
      return "condition2";
    case Case::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

std::optional<Case> dimension_case(Index m, Index n, Index k, Index l) {
  if (m < 1 || n < 1 || k < 1 || l < 1) return std::nullopt;
  if (k >= l) {
    if (m >= l && n >= l) return Case::kCondition1;
    return std::nullopt;
  }
  if (m >= k && n >= k) return Case::kCondition2;
  return std::nullopt;
}

FeasibilityReport check_conditions(Index m, Index n, Index k, Index l,
                                   const RealVector& sigma_b, double zero_tol) {
  if (m < 1 || n < 1 || k < 1 || l < 1) {
    throw InvalidInputError("check_conditions: dimensions must be positive, " +
                            dims_string(m, n, k, l));
  }
  if (zero_tol < 0.0 || !std::isfinite(zero_tol)) {
    throw InvalidInputError("check_conditions: zero_tol must be nonnegative");
  }
  const Index p = std::min(k, l);
  if (sigma_b.size() != p) {
    throw InvalidInputError("check_conditions: sigma_b needs min(k,l) = " +
                            std::to_string(p) + " entries, got " +
                            std::to_string(sigma_b.size()));
  }
  require_spectrum(sigma_b, "check_conditions");

  FeasibilityReport rep;
  rep.p = p;
  rep.dims = {m, n, k, l};
  rep.sigma_b_min = sigma_b.minCoeff();

  if (k >= l) {
    if (m < l)
      rep.violations.push_back("m < l (m=" + std::to_string(m) +
                               ", l=" + std::to_string(l) + ")");
    if (n < l)
      rep.violations.push_back("n < l (n=" + std::to_string(n) +
                               ", l=" + std::to_string(l) + ")");
  } else {
    if (m < k)
      rep.violations.push_back("m < k (m=" + std::to_string(m) +
                               ", k=" + std::to_string(k) + ")");
    if (n < k)
      rep.violations.push_back("n < k (n=" + std::to_string(n) +
                               ", k=" + std::to_string(k) + ")");
  }

  const double threshold = zero_threshold(sigma_b, zero_tol);
  for (Index i = 0; i < p; ++i) {
    if (!(sigma_b[i] > threshold)) {
      std::ostringstream os;
      os << "B singular within tolerance: sigma_B[" << (i + 1) << "] = "
         << sigma_b[i] << " <= " << threshold;
      rep.violations.push_back(os.str());
      break;  // descending, so everything after fails too
    }
  }

  rep.condition = rep.violations.empty()
                      ? (k >= l ? Case::kCondition1 : Case::kCondition2)
                      : Case::kInfeasible;
  return rep;
}

RealVector scaling_diagonal(const RealVector& sigma_a, const RealVector& sigma_b,
                            Index p, double zero_tol) {
  if (p < 0 || sigma_a.size() < p || sigma_b.size() < p) {
    throw InvalidInputError(
        "scaling_diagonal: need at least p = " + std::to_string(p) +
        " entries in each spectrum, got " + std::to_string(sigma_a.size()) +
        " and " + std::to_string(sigma_b.size()));
  }
  require_spectrum(sigma_a, "scaling_diagonal");
  require_spectrum(sigma_b, "scaling_diagonal");

  const double threshold = zero_threshold(sigma_b, zero_tol);
  RealVector d(p);
  for (Index i = 0; i < p; ++i) {
    if (!(sigma_b[i] > threshold)) {
      std::ostringstream os;
      os << "B singular within tolerance: sigma_B[" << (i + 1) << "] = "
         << sigma_b[i] << " <= " << threshold;
      throw SingularBError(os.str(), i);
    }
    d[i] = std::sqrt(sigma_a[i] / sigma_b[i]);
  }
  return d;
}

ScalingFactors build_scaling(const RealVector& d, Index m, Index n, Index k,
                             Index l, Case condition) {
  const Index p = std::min(k, l);
  if (d.size() != p) {
    throw InvalidInputError("build_scaling: d needs min(k,l) = " +
                            std::to_string(p) + " entries, got " +
                            std::to_string(d.size()));
  }
  require_spectrum(d, "build_scaling");
  const std::optional<Case> dims = dimension_case(m, n, k, l);
  if (condition == Case::kInfeasible || !dims || *dims != condition) {
    throw InvalidInputError("build_scaling: dims " + dims_string(m, n, k, l) +
                            " do not satisfy " + case_name(condition));
  }

  RealVector r_diag = RealVector::Zero(std::min(m, k));
  r_diag.head(p) = d;
  RealVector s_diag = RealVector::Zero(std::min(l, n));
  s_diag.head(p) = d;

  ScalingFactors out;
  out.d = d;
  out.r = make_rect_diagonal(m, k, std::move(r_diag));
  out.s_adj = make_rect_diagonal(l, n, std::move(s_diag));
  out.condition = condition;
  return out;
}

ScalingFactors sigma_decompose(const RectDiagonal& sigma_a,
                               const RectDiagonal& sigma_b, double zero_tol) {
  const Index m = sigma_a.rows, n = sigma_a.cols;
  const Index k = sigma_b.rows, l = sigma_b.cols;
  require_spectrum(sigma_a.diag, "sigma_decompose");

  const FeasibilityReport rep = check_conditions(m, n, k, l, sigma_b.diag, zero_tol);
  const std::optional<Case> dims = dimension_case(m, n, k, l);
  if (!dims) {
    throw InfeasibleError("sigma_decompose: no decomposition exists for " +
                              dims_string(m, n, k, l) + ": " +
                              join(rep.violations),
                          rep.violations);
  }
  RealVector d = scaling_diagonal(sigma_a.diag, sigma_b.diag, rep.p, zero_tol);
  ScalingFactors out = build_scaling(d, m, n, k, l, *dims);

  // Internal postcondition: the leading p x p block of sigma_A is reproduced
  // exactly up to rounding of d_i^2 * sigma_B_i.
  for (Index i = 0; i < rep.p; ++i) {
    const double rebuilt = out.d[i] * out.d[i] * sigma_b.diag[i];
    const double err = std::abs(rebuilt - sigma_a.diag[i]);
    if (err > 8.0 * std::numeric_limits<double>::epsilon() *
                  std::max(1.0, sigma_a.diag[i])) {
      throw Error("sigma_decompose: leading-block identity failed at index " +
                  std::to_string(i));
    }
  }
  return out;
}

double residual_tail(const RealVector& sigma_a, Index p) {
  if (p < 0 || p > sigma_a.size()) {
    throw InvalidInputError("residual_tail: p = " + std::to_string(p) +
                            " out of range for spectrum of length " +
                            std::to_string(sigma_a.size()));
  }
  return sigma_a.tail(sigma_a.size() - p).norm();
}

ConditionalFactors conditional_svd(const ComplexDense& a, const ComplexDense& b,
                                   const DecomposeOptions& opts) {
  detail::require_nonempty(a, "conditional_svd: A");
  detail::require_nonempty(b, "conditional_svd: B");
  detail::require_finite(a, "conditional_svd: A");
  detail::require_finite(b, "conditional_svd: B");

  const Index m = a.rows(), n = a.cols();
  const Index k = b.rows(), l = b.cols();

  const SvdFactors fa = full_svd(a);
  const SvdFactors fb = full_svd(b);

  FeasibilityReport rep =
      check_conditions(m, n, k, l, fb.sigma.diag, opts.zero_tol);
  const std::optional<Case> dims = dimension_case(m, n, k, l);
  if (!dims) {
    throw InfeasibleError("conditional_svd: no decomposition exists for " +
                              dims_string(m, n, k, l) + ": " +
                              join(rep.violations),
                          rep.violations);
  }
  // Dims hold, so any remaining violation is a degenerate B; this throws
  // SingularBError with the offending index.
  RealVector d =
      scaling_diagonal(fa.sigma.diag, fb.sigma.diag, rep.p, opts.zero_tol);

  ConditionalFactors out;
  out.scaling = build_scaling(d, m, n, k, l, *dims);
  out.h = fa.u * embed(out.scaling.r) * fb.u.adjoint();
  out.m = fa.v * ComplexDense(embed(out.scaling.s_adj).adjoint()) * fb.v.adjoint();
  out.residual_abs = (a - out.h * b * out.m.adjoint()).norm();
  out.residual_rel = out.residual_abs / std::max(1.0, a.norm());
  out.exact = out.residual_rel <= opts.exact_tol;
  out.report = rep;

  if (opts.strict && !out.exact) {
    const double tail = residual_tail(fa.sigma.diag, rep.p);
    std::ostringstream os;
    os << "conditional_svd: not exactly decomposable, unavoidable residual "
          "sqrt(sum_{i>p} sigma_A_i^2) = "
       << tail;
    throw NotDecomposableError(os.str(), tail);
  }
  return out;
}

SpecialFactors special_case(const ComplexDense& a, const ComplexDense& b,
                            const DecomposeOptions& opts) {
  detail::require_nonempty(a, "special_case: A");
  detail::require_nonempty(b, "special_case: B");
  detail::require_finite(a, "special_case: A");
  detail::require_finite(b, "special_case: B");
  if (a.rows() != a.cols()) {
    throw InvalidInputError("special_case: A must be square, got " +
                            detail::shape_string(a.rows(), a.cols()));
  }
  if (b.rows() != b.cols()) {
    throw InvalidInputError("special_case: B must be square, got " +
                            detail::shape_string(b.rows(), b.cols()));
  }
  if (a.rows() != b.rows()) {
    throw InvalidInputError("special_case: A and B must share one dimension, "
                            "got " +
                            detail::shape_string(a.rows(), a.cols()) + " and " +
                            detail::shape_string(b.rows(), b.cols()));
  }
  const Index n = a.rows();
  if (!is_hermitian(a, opts.zero_tol * a.norm())) {
    throw InvalidInputError("special_case: A is not Hermitian within tolerance");
  }
  if (!is_hermitian(b, opts.zero_tol * b.norm())) {
    throw InvalidInputError("special_case: B is not Hermitian within tolerance");
  }

  HermitianEig ea, eb;
  try {
    ea = hermitian_psd_eig(a, opts.zero_tol);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(std::string("special_case: A: ") + e.what());
  }
  try {
    eb = hermitian_psd_eig(b, opts.zero_tol);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(std::string("special_case: B: ") + e.what());
  }

  // B must be positive definite within the zero tolerance.
  const double threshold =
      eb.lambda[0] > 0.0 ? opts.zero_tol * eb.lambda[0] : opts.zero_tol;
  for (Index i = 0; i < n; ++i) {
    if (!(eb.lambda[i] > threshold)) {
      std::ostringstream os;
      os << "special_case: B singular within tolerance: lambda_B[" << (i + 1)
         << "] = " << eb.lambda[i] << " <= " << threshold;
      throw SingularBError(os.str(), i);
    }
  }

  RealVector d(n);
  for (Index i = 0; i < n; ++i) d[i] = std::sqrt(ea.lambda[i] / eb.lambda[i]);

  SpecialFactors out;
  out.h = ea.u * d.cast<Complex>().asDiagonal() * eb.u.adjoint();
  out.residual_abs = (a - out.h * b * out.h.adjoint()).norm();
  out.residual_rel = out.residual_abs / std::max(1.0, a.norm());
  out.exact = out.residual_rel <= opts.exact_tol;
  if (opts.strict && !out.exact) {
    std::ostringstream os;
    os << "special_case: not exactly decomposable, residual " << out.residual_abs;
    throw NotDecomposableError(os.str(), out.residual_abs);
  }
  return out;
}

VerifyReport verify_factors(const ComplexDense& a, const ComplexDense& b,
                            const ComplexDense& h, const ComplexDense& m,
                            double tol) {
  detail::require_nonempty(a, "verify_factors: A");
  detail::require_nonempty(b, "verify_factors: B");
  detail::require_nonempty(h, "verify_factors: H");
  detail::require_nonempty(m, "verify_factors: M");
  if (h.rows() != a.rows() || h.cols() != b.rows()) {
    throw InvalidInputError(
        "verify_factors: H must be " +
        detail::shape_string(a.rows(), b.rows()) + ", got " +
        detail::shape_string(h.rows(), h.cols()));
  }
  if (m.rows() != a.cols() || m.cols() != b.cols()) {
    throw InvalidInputError(
        "verify_factors: M must be " +
        detail::shape_string(a.cols(), b.cols()) + ", got " +
        detail::shape_string(m.rows(), m.cols()));
  }

  VerifyReport rep;
  rep.residual_abs = (a - h * b * m.adjoint()).norm();
  rep.residual_rel = rep.residual_abs / std::max(1.0, a.norm());
  const ComplexDense hh = h * h.adjoint();
  const ComplexDense mm = m * m.adjoint();
  rep.hh_hermitian = is_hermitian(hh, 1e-10 * h.squaredNorm());
  rep.mm_hermitian = is_hermitian(mm, 1e-10 * m.squaredNorm());
  rep.pass = rep.hh_hermitian && rep.mm_hermitian && rep.residual_rel <= tol;
  return rep;
}

}  // namespace csvd
