#pragma once
// Dense complex linear algebra underpinning the rest of the library:
// validation helpers, guarded inversion, a branch-pinned log-determinant,
// Takagi factorization of complex symmetric matrices, and the hyperbolic
// cosh/sinh block pair generated by a symmetric matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "canonfock/errors.hpp"

namespace canonfock::linops {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Condition number beyond which inverse/solve refuse to answer.
inline constexpr double kCondLimit = 1e14;

// ---------------- validation ----------------

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m, const char* where) {
  if (!m.allFinite()) throw InvalidInput("NotFinite", std::string(where) + ": non-finite entry");
}

inline void require_square(const ComplexMatrix& m, const char* where) {
  if (m.rows() != m.cols())
    throw InvalidInput("ShapeMismatch", std::string(where) + ": matrix must be square");
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                               const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("ShapeMismatch", std::string(where) + ": shapes differ");
}

// Symmetry (not hermiticity): m == m^T within an absolute-or-relative band.
inline void require_symmetric(const ComplexMatrix& m, const char* where, double tol = 1e-12) {
  require_square(m, where);
  if (m.size() == 0) return;
  double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (dev > tol * scale)
    throw InvalidInput("NotSymmetric", std::string(where) + ": asymmetry " + std::to_string(dev));
}

inline void require_hermitian(const ComplexMatrix& m, const char* where, double tol = 1e-12) {
  require_square(m, where);
  if (m.size() == 0) return;
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (dev > tol * scale)
    throw InvalidInput("NotSymmetric", std::string(where) + ": non-hermitian, deviation " +
                                           std::to_string(dev));
}

inline ComplexMatrix symmetrize(const ComplexMatrix& m) {
  return 0.5 * (m + m.transpose());
}

// ---------------- norms, determinants, inversion ----------------

// Hilbert-Schmidt (Frobenius) norm.
inline double hs_norm(const ComplexMatrix& m) {
  return m.norm();
}

// Largest singular value.
inline double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

inline Complex det(const ComplexMatrix& m) {
  require_square(m, "det");
  return m.determinant();
}

// log det via the sum of principal-branch logs of the eigenvalues. Every use
// in this library has spectrum in the open right half plane (arguments are
// I - X or I + X with a contraction X), where this equals the analytic
// continuation of log det from the identity; the branch is therefore global,
// not just principal per call.
inline Complex log_det(const ComplexMatrix& m) {
  require_square(m, "log_det");
  if (m.size() == 0) return Complex(0.0, 0.0);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("ConvergenceFailure", "log_det: eigenvalue iteration failed");
  Complex acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Complex lam = es.eigenvalues()(i);
    if (lam == Complex(0.0, 0.0))
      throw NumericalFailure("Singular", "log_det: zero eigenvalue");
    acc += std::log(lam);
  }
  return acc;
}

namespace detail {

inline Eigen::JacobiSVD<ComplexMatrix> guarded_svd(const ComplexMatrix& m, const char* where,
                                                   double cond_limit) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (smin <= 0.0 || smax / smin > cond_limit)
    throw NumericalFailure("Singular", std::string(where) + ": condition number beyond " +
                                           std::to_string(cond_limit));
  return svd;
}

}  // namespace detail

// Inverse with a condition-number guard; near-singular input raises Singular
// instead of returning garbage.
inline ComplexMatrix inverse(const ComplexMatrix& m, double cond_limit = kCondLimit) {
  require_square(m, "inverse");
  require_finite(m, "inverse");
  if (m.size() == 0) return m;  // empty map is its own inverse
  auto svd = detail::guarded_svd(m, "inverse", cond_limit);
  return svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
         svd.matrixU().adjoint();
}

// Solve m x = b with the same guard as inverse().
inline ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b,
                           double cond_limit = kCondLimit) {
  require_square(m, "solve");
  if (m.rows() != b.rows()) throw InvalidInput("ShapeMismatch", "solve: row count mismatch");
  if (m.size() == 0) return b;
  auto svd = detail::guarded_svd(m, "solve", cond_limit);
  return svd.solve(b);
}

// ---------------- Takagi factorization ----------------

// a = w * diag(d) * w^T with w unitary and d real, nonnegative, descending.
struct TakagiFactorization {
  ComplexMatrix w;
  RealVector d;
};

// Takagi factorization of a complex symmetric matrix via the real symmetric
// doubling [[X, Y], [Y, -X]] of a = X + iY: an eigenvector (u; v) with
// eigenvalue s > 0 yields a column w = u + iv satisfying a * conj(w) = s * w,
// and the columns for distinct eigenvectors come out orthonormal. Columns for
// numerically zero singular values are replaced by a unitary completion
// (anything unitary works there). Column gauge is fixed deterministically:
// sign flips for d_k > 0 (the only gauge that preserves the factorization),
// full phase rotation for d_k == 0.
inline TakagiFactorization takagi(const ComplexMatrix& a, double sym_tol = 1e-10) {
  require_finite(a, "takagi");
  require_symmetric(a, "takagi", sym_tol);
  const Eigen::Index n = a.rows();
  TakagiFactorization out;
  if (n == 0) {
    out.w.resize(0, 0);
    out.d.resize(0);
    return out;
  }
  ComplexMatrix as = symmetrize(a);

  RealMatrix doubling(2 * n, 2 * n);
  doubling.topLeftCorner(n, n) = as.real();
  doubling.topRightCorner(n, n) = as.imag();
  doubling.bottomLeftCorner(n, n) = as.imag();
  doubling.bottomRightCorner(n, n) = -as.real();

  Eigen::SelfAdjointEigenSolver<RealMatrix> es(doubling);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("ConvergenceFailure", "takagi: eigenvalue iteration failed");

  // Eigenvalues are sorted ascending and come in +/- pairs; the top n are the
  // singular values. Reverse to descending.
  out.w.resize(n, n);
  out.d.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index src = 2 * n - 1 - k;
    out.d(k) = es.eigenvalues()(src);
    out.w.col(k) = es.eigenvectors().col(src).head(n) +
                   Complex(0.0, 1.0) * es.eigenvectors().col(src).tail(n);
  }

  // Numerically-zero singular values: clamp, and rebuild those columns as a
  // unitary completion of the positive-d columns.
  double dmax = out.d.size() ? std::max(out.d(0), 0.0) : 0.0;
  double zero_tol = 1e-13 * std::max(1.0, dmax);
  Eigen::Index rank = 0;
  while (rank < n && out.d(rank) > zero_tol) ++rank;
  for (Eigen::Index k = rank; k < n; ++k) out.d(k) = 0.0;
  if (rank < n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(out.w.leftCols(rank));
    ComplexMatrix q = qr.householderQ();
    out.w.rightCols(n - rank) = q.rightCols(n - rank);
  }

  // Deterministic gauge per column.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index lead = 0;
    double colmax = out.w.col(k).cwiseAbs().maxCoeff();
    while (lead < n - 1 && std::abs(out.w(lead, k)) < 0.1 * colmax) ++lead;
    Complex pivot = out.w(lead, k);
    if (k < rank) {
      bool flip = pivot.real() < 0.0 ||
                  (std::abs(pivot.real()) < 1e-12 * std::abs(pivot) && pivot.imag() < 0.0);
      if (flip) out.w.col(k) = -out.w.col(k);
    } else {
      out.w.col(k) *= std::conj(pivot) / std::abs(pivot);
    }
  }

  double resid = (out.w * out.d.asDiagonal() * out.w.transpose() - as).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * std::max(1.0, dmax))
    throw NumericalFailure("ConvergenceFailure",
                           "takagi: reconstruction residual " + std::to_string(resid));
  return out;
}

// ---------------- hyperbolic blocks ----------------

// The pair u = cosh, v = sinh of a complex symmetric xi, in the sense
// u = w cosh(d) w^dagger, v = w sinh(d) w^T for the Takagi data of xi.
// u is hermitian positive definite, v is symmetric, and u u^dagger - v
// v^dagger = 1 holds by construction.
struct SqueezeBlocks {
  ComplexMatrix u;
  ComplexMatrix v;
};

inline SqueezeBlocks squeeze_blocks(const ComplexMatrix& xi, double sym_tol = 1e-10) {
  TakagiFactorization tf = takagi(xi, sym_tol);
  RealVector ch = tf.d.array().cosh();
  RealVector sh = tf.d.array().sinh();
  SqueezeBlocks out;
  out.u = tf.w * ch.asDiagonal() * tf.w.adjoint();
  out.v = tf.w * sh.asDiagonal() * tf.w.transpose();
  return out;
}

}  // namespace canonfock::linops
