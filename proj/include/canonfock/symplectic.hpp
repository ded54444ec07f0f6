#pragma once
// One-particle layer of the Bogoliubov group: pairs (u, v) acting on mode
// vectors as f -> u f + v conj(f), preserving the commutation relations.
// Provides the canonicity test, composition and inversion, exponentials of
// rotation/squeeze generators, the fractional-linear action on the Siegel
// disc, and reduction of a squeeze kernel to decoupled single-mode form.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "canonfock/errors.hpp"
#include "canonfock/linops.hpp"

namespace canonfock::symplectic {

using linops::Complex;
using linops::ComplexMatrix;
using linops::ComplexVector;
using linops::RealVector;

// Hermitian generator; exponentiates to the phase rotation u = exp(i psi).
struct RotationGenerator {
  ComplexMatrix psi;

  explicit RotationGenerator(ComplexMatrix psi_) : psi(std::move(psi_)) {
    linops::require_finite(psi, "RotationGenerator");
    linops::require_hermitian(psi, "RotationGenerator");
  }

  Eigen::Index modes() const { return psi.rows(); }
};

// Symmetric generator; exponentiates to the hyperbolic pair of squeeze_blocks.
struct SqueezeGenerator {
  ComplexMatrix xi;

  explicit SqueezeGenerator(ComplexMatrix xi_) : xi(std::move(xi_)) {
    linops::require_finite(xi, "SqueezeGenerator");
    linops::require_symmetric(xi, "SqueezeGenerator", 1e-10);
    xi = linops::symmetrize(xi);
  }

  Eigen::Index modes() const { return xi.rows(); }
};

struct SymplecticPair {
  ComplexMatrix u;
  ComplexMatrix v;

  SymplecticPair(ComplexMatrix u_, ComplexMatrix v_) : u(std::move(u_)), v(std::move(v_)) {
    linops::require_square(u, "SymplecticPair");
    linops::require_same_shape(u, v, "SymplecticPair");
    linops::require_finite(u, "SymplecticPair");
    linops::require_finite(v, "SymplecticPair");
  }

  Eigen::Index modes() const { return u.rows(); }
};

inline SymplecticPair identity_pair(Eigen::Index n) {
  return SymplecticPair(ComplexMatrix::Identity(n, n), ComplexMatrix::Zero(n, n));
}

// Largest residual over both canonicity condition sets,
//   u u^H - v v^H = 1,  u v^T = v u^T,
//   u^H u - v^T conj(v) = 1,  u^T conj(v) = v^H u.
inline double canonicity_residual(const SymplecticPair& g) {
  const Eigen::Index n = g.modes();
  ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  double r = (g.u * g.u.adjoint() - g.v * g.v.adjoint() - eye).cwiseAbs().maxCoeff();
  r = std::max(r, (g.u * g.v.transpose() - g.v * g.u.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r,
               (g.u.adjoint() * g.u - g.v.transpose() * g.v.conjugate() - eye).cwiseAbs().maxCoeff());
  r = std::max(r, (g.u.transpose() * g.v.conjugate() - g.v.adjoint() * g.u).cwiseAbs().maxCoeff());
  return r;
}

// Default tolerance scales with mode count.
inline double canonicity_tol(Eigen::Index n) {
  return 1e-10 * static_cast<double>(std::max<Eigen::Index>(n, 1));
}

inline bool is_canonical(const SymplecticPair& g, double tol = -1.0) {
  if (tol < 0.0) tol = canonicity_tol(g.modes());
  return canonicity_residual(g) <= tol;
}

// Group product: g2 after g1.
inline SymplecticPair compose(const SymplecticPair& g2, const SymplecticPair& g1) {
  if (g2.modes() != g1.modes())
    throw InvalidInput("ShapeMismatch", "compose: mode counts differ");
  return SymplecticPair(g2.u * g1.u + g2.v * g1.v.conjugate(),
                        g2.u * g1.v + g2.v * g1.u.conjugate());
}

// Group inverse (u^H, -v^T); exact for canonical pairs, no solve involved.
inline SymplecticPair inverse(const SymplecticPair& g) {
  return SymplecticPair(g.u.adjoint(), -g.v.transpose());
}

// Action on a mode vector: f -> u f + v conj(f).
inline ComplexVector apply(const SymplecticPair& g, const ComplexVector& f) {
  if (f.size() != g.modes()) throw InvalidInput("ShapeMismatch", "apply: vector length");
  return g.u * f + g.v * f.conjugate();
}

inline SymplecticPair from_rotation(const RotationGenerator& gen) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen.psi);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("ConvergenceFailure", "from_rotation: eigenvalue iteration failed");
  ComplexVector phase =
      (Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>().array()).exp();
  ComplexMatrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return SymplecticPair(u, ComplexMatrix::Zero(u.rows(), u.cols()));
}

inline SymplecticPair from_squeeze(const SqueezeGenerator& gen) {
  linops::SqueezeBlocks blocks = linops::squeeze_blocks(gen.xi);
  return SymplecticPair(std::move(blocks.u), std::move(blocks.v));
}

// Fractional-linear action on the Siegel disc:
//   z -> (u^H + z v^H)^{-1} (v^T + z u^T).
// The exact image of a symmetric z is symmetric; roundoff asymmetry is
// folded back by symmetrization. Refuses input/output outside the disc.
inline ComplexMatrix siegel_action(const SymplecticPair& g, const ComplexMatrix& z) {
  linops::require_symmetric(z, "siegel_action", 1e-10);
  if (z.rows() != g.modes()) throw InvalidInput("ShapeMismatch", "siegel_action: size");
  if (linops::spectral_norm(z) >= 1.0)
    throw InvalidInput("SiegelViolation", "siegel_action: input outside the open disc");
  ComplexMatrix m = g.u.adjoint() + z * g.v.adjoint();
  ComplexMatrix zeta = linops::solve(m, g.v.transpose() + z * g.u.transpose());
  zeta = linops::symmetrize(zeta);
  if (linops::spectral_norm(zeta) >= 1.0)
    throw NumericalFailure("Singular", "siegel_action: image left the open disc");
  return zeta;
}

// Rotation conjugation of a squeeze kernel: xi -> e^{-i phi} xi e^{-i phi^T}.
inline ComplexMatrix conjugate_squeeze(const ComplexMatrix& phi, const ComplexMatrix& xi) {
  linops::require_hermitian(phi, "conjugate_squeeze");
  linops::require_symmetric(xi, "conjugate_squeeze", 1e-10);
  if (phi.rows() != xi.rows()) throw InvalidInput("ShapeMismatch", "conjugate_squeeze: size");
  ComplexMatrix e = from_rotation(RotationGenerator(-phi)).u;  // e = exp(-i phi)
  return linops::symmetrize(e * xi * e.transpose());
}

// Decoupling data: hermitian phi with conjugate_squeeze(phi, xi) = diag(d),
// i.e. a mode rotation after which the squeeze acts mode by mode.
struct SingleModeReduction {
  ComplexMatrix phi;
  RealVector d;
};

inline SingleModeReduction reduce_to_single_modes(const ComplexMatrix& xi) {
  linops::TakagiFactorization tf = linops::takagi(xi);
  // Need hermitian phi with exp(-i phi) = w^H. A unitary matrix has diagonal
  // Schur form, so read the spectrum off the Schur diagonal.
  Eigen::ComplexSchur<ComplexMatrix> schur(tf.w.adjoint());
  if (schur.info() != Eigen::Success)
    throw NumericalFailure("ConvergenceFailure", "reduce_to_single_modes: Schur failed");
  const Eigen::Index n = xi.rows();
  RealVector theta(n);
  for (Eigen::Index i = 0; i < n; ++i) theta(i) = -std::arg(schur.matrixT()(i, i));
  ComplexMatrix phi =
      schur.matrixU() * theta.cast<Complex>().asDiagonal() * schur.matrixU().adjoint();
  phi = 0.5 * (phi + phi.adjoint());
  return SingleModeReduction{std::move(phi), tf.d};
}

}  // namespace canonfock::symplectic
