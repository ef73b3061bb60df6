#include "csvd/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace csvd {

namespace {

// Off-diagonal magnitudes below this, relative to the participating scales,
// count as annihilated; a full sweep with no rotation terminates the solver.
constexpr double kJacobiRelTol = 1e-14;
constexpr int kMaxSweeps = 60;

// Below this a singular value is numerically a true zero and the matching
// left column comes from basis completion instead of normalization.
constexpr double kNullSigma = 1e-290;

struct Rotation2 {
  double c;
  double s;
  Complex omega_bar;  // conjugate phase of the off-diagonal element
};

// Unitary diagonalizing the Hermitian 2x2 [[app, apq], [conj(apq), aqq]]:
// factor out the phase of apq, then a real Jacobi rotation with the
// smaller-angle tangent root.
Rotation2 make_rotation(double app, double aqq, const Complex& apq, double mag) {
  const Complex omega_bar = std::conj(apq) / mag;
  const double zeta = (aqq - app) / (2.0 * mag);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return Rotation2{c, c * t, omega_bar};
}

// Columns p, q <- [c*p - s*(w*q), s*p + c*(w*q)] with w = omega_bar.
void rotate_columns(ComplexDense& a, Index p, Index q, const Rotation2& r) {
  for (Index i = 0; i < a.rows(); ++i) {
    const Complex xp = a(i, p);
    const Complex xq = r.omega_bar * a(i, q);
    a(i, p) = r.c * xp - r.s * xq;
    a(i, q) = r.s * xp + r.c * xq;
  }
}

// Row update of the same similarity transform (coefficients conjugated).
void rotate_rows(ComplexDense& a, Index p, Index q, const Rotation2& r) {
  const Complex omega = std::conj(r.omega_bar);
  for (Index j = 0; j < a.cols(); ++j) {
    const Complex xp = a(p, j);
    const Complex xq = omega * a(q, j);
    a(p, j) = r.c * xp - r.s * xq;
    a(q, j) = r.s * xp + r.c * xq;
  }
}

Index argmax_abs(const ComplexDense& a, Index col) {
  Index best = 0;
  double best_mag = -1.0;
  for (Index i = 0; i < a.rows(); ++i) {
    const double mag = std::abs(a(i, col));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  return best;
}

// Rotate the column so its largest-magnitude entry becomes real positive.
void fix_phase_single(ComplexDense& a, Index col) {
  const Index i = argmax_abs(a, col);
  const double mag = std::abs(a(i, col));
  if (mag <= 0.0) return;
  const Complex phase = a(i, col) / mag;
  a.col(col) *= std::conj(phase);
}

// Deterministic phase convention: for each singular triple the left vector's
// largest-magnitude entry is made real positive, compensated in v so
// u sigma v* is unchanged; unpaired columns are phased individually.
void fix_phases(SvdFactors& f) {
  const Index r = f.sigma.diag.size();
  for (Index j = 0; j < r; ++j) {
    if (f.sigma.diag[j] > 0.0) {
      const Index i = argmax_abs(f.u, j);
      const double mag = std::abs(f.u(i, j));
      if (mag <= 0.0) continue;
      const Complex phase = std::conj(f.u(i, j) / mag);
      f.u.col(j) *= phase;
      f.v.col(j) *= phase;
    } else {
      fix_phase_single(f.u, j);
      fix_phase_single(f.v, j);
    }
  }
  for (Index j = r; j < f.u.cols(); ++j) fix_phase_single(f.u, j);
  for (Index j = r; j < f.v.cols(); ++j) fix_phase_single(f.v, j);
}

// Fill the listed columns of u with an orthonormal completion of the already
// filled ones. Candidates are standard basis vectors, picked by largest
// component outside the current span, orthogonalized twice.
void complete_columns(ComplexDense& u, const std::vector<Index>& filled,
                      const std::vector<Index>& slots) {
  const Index m = u.rows();
  std::vector<Index> have = filled;
  RealVector row_weight = RealVector::Zero(m);
  for (Index j : have) {
    for (Index i = 0; i < m; ++i) row_weight[i] += std::norm(u(i, j));
  }
  for (Index slot : slots) {
    Index pick = 0;
    double least = row_weight[0];
    for (Index i = 1; i < m; ++i) {
      if (row_weight[i] < least) {
        least = row_weight[i];
        pick = i;
      }
    }
    ComplexVector r = ComplexVector::Zero(m);
    r[pick] = Complex(1.0, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j : have) {
        const Complex coeff = u.col(j).dot(r);
        r -= coeff * u.col(j);
      }
    }
    r /= r.norm();
    u.col(slot) = r;
    have.push_back(slot);
    for (Index i = 0; i < m; ++i) row_weight[i] += std::norm(r[i]);
  }
}

// One-sided Jacobi for m >= n: orthogonalize the columns of a working copy,
// accumulating the right factor, then read off sigma and u.
SvdFactors jacobi_tall(const ComplexDense& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  ComplexDense w = a;
  ComplexDense v = ComplexDense::Identity(n, n);

  for (int sweep = 0;; ++sweep) {
    if (sweep >= kMaxSweeps) {
      throw ConvergenceError(
          "one-sided jacobi svd did not converge within " +
          std::to_string(kMaxSweeps) + " sweeps on a " +
          detail::shape_string(m, n) + " matrix");
    }
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double app = w.col(p).squaredNorm();
        const double aqq = w.col(q).squaredNorm();
        const Complex apq = w.col(p).dot(w.col(q));
        const double mag = std::abs(apq);
        if (mag <= kJacobiRelTol * std::sqrt(app) * std::sqrt(aqq)) continue;
        const Rotation2 rot = make_rotation(app, aqq, apq, mag);
        rotate_columns(w, p, q, rot);
        rotate_columns(v, p, q, rot);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  RealVector norms(n);
  for (Index j = 0; j < n; ++j) norms[j] = w.col(j).norm();

  // Descending order; stable so exact ties keep column order.
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return norms[x] > norms[y]; });

  ComplexDense u = ComplexDense::Zero(m, m);
  ComplexDense v_sorted(n, n);
  RealVector sigma(n);
  std::vector<Index> filled;
  std::vector<Index> slots;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<size_t>(j)];
    sigma[j] = norms[src];
    v_sorted.col(j) = v.col(src);
    if (norms[src] > kNullSigma) {
      u.col(j) = w.col(src) / norms[src];
      filled.push_back(j);
    } else {
      sigma[j] = 0.0;
      slots.push_back(j);
    }
  }
  for (Index j = n; j < m; ++j) slots.push_back(j);
  complete_columns(u, filled, slots);

  return SvdFactors{std::move(u), RectDiagonal{m, n, std::move(sigma)},
                    std::move(v_sorted)};
}

}  // namespace

SvdFactors full_svd(const ComplexDense& a) {
  detail::require_nonempty(a, "full_svd");
  detail::require_finite(a, "full_svd");

  SvdFactors f;
  if (a.rows() >= a.cols()) {
    f = jacobi_tall(a);
  } else {
    // a = (a*)* = v' sigma'^T u'*, so the factors swap roles.
    SvdFactors t = jacobi_tall(a.adjoint());
    f.u = std::move(t.v);
    f.v = std::move(t.u);
    f.sigma = RectDiagonal{a.rows(), a.cols(), std::move(t.sigma.diag)};
  }
  fix_phases(f);
  return f;
}

HermitianEig hermitian_psd_eig(const ComplexDense& a, double tol) {
  detail::require_nonempty(a, "hermitian_psd_eig");
  detail::require_finite(a, "hermitian_psd_eig");
  if (a.rows() != a.cols()) {
    throw InvalidInputError("hermitian_psd_eig: matrix must be square, got " +
                            detail::shape_string(a.rows(), a.cols()));
  }
  const Index n = a.rows();
  const double scale = a.norm();
  if (!is_hermitian(a, tol * scale)) {
    throw InvalidInputError(
        "hermitian_psd_eig: input is not Hermitian within tolerance " +
        std::to_string(tol));
  }

  // Work on the Hermitian part so inputs Hermitian only to tolerance are
  // handled consistently.
  ComplexDense g = 0.5 * (a + ComplexDense(a.adjoint()));
  ComplexDense u = ComplexDense::Identity(n, n);
  const double off_floor = 1e-15 * scale;

  for (int sweep = 0;; ++sweep) {
    if (sweep >= kMaxSweeps) {
      throw ConvergenceError(
          "hermitian jacobi eigensolver did not converge within " +
          std::to_string(kMaxSweeps) + " sweeps on a " +
          detail::shape_string(n, n) + " matrix");
    }
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double app = g(p, p).real();
        const double aqq = g(q, q).real();
        const Complex apq = g(p, q);
        const double mag = std::abs(apq);
        if (mag <= off_floor ||
            mag <= kJacobiRelTol * std::sqrt(std::abs(app) * std::abs(aqq))) {
          continue;
        }
        const Rotation2 rot = make_rotation(app, aqq, apq, mag);
        rotate_columns(g, p, q, rot);
        rotate_rows(g, p, q, rot);
        rotate_columns(u, p, q, rot);
        // Annihilated pair; keep the working matrix exactly Hermitian.
        g(p, q) = Complex(0.0, 0.0);
        g(q, p) = Complex(0.0, 0.0);
        g(p, p) = Complex(g(p, p).real(), 0.0);
        g(q, q) = Complex(g(q, q).real(), 0.0);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  RealVector lambda(n);
  for (Index j = 0; j < n; ++j) lambda[j] = g(j, j).real();

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return lambda[x] > lambda[y]; });

  HermitianEig out;
  out.u.resize(n, n);
  out.lambda.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<size_t>(j)];
    out.lambda[j] = lambda[src];
    out.u.col(j) = u.col(src);
  }

  if (out.lambda[n - 1] < -tol * scale) {
    throw InvalidInputError(
        "hermitian_psd_eig: input is not positive semidefinite, smallest "
        "eigenvalue " +
        std::to_string(out.lambda[n - 1]));
  }
  for (Index j = 0; j < n; ++j) {
    if (out.lambda[j] < 0.0) out.lambda[j] = 0.0;
  }
  for (Index j = 0; j < n; ++j) fix_phase_single(out.u, j);
  return out;
}

ComplexDense reconstruct(const SvdFactors& f) {
  if (f.u.rows() != f.u.cols() || f.v.rows() != f.v.cols() ||
      f.u.rows() != f.sigma.rows || f.v.rows() != f.sigma.cols ||
      f.sigma.diag.size() != std::min(f.sigma.rows, f.sigma.cols)) {
    throw InvalidInputError(
        "reconstruct: inconsistent factor dimensions, u " +
        detail::shape_string(f.u.rows(), f.u.cols()) + ", sigma " +
        detail::shape_string(f.sigma.rows, f.sigma.cols) + ", v " +
        detail::shape_string(f.v.rows(), f.v.cols()));
  }
  return f.u * embed(f.sigma) * f.v.adjoint();
}

}  // namespace csvd
