#pragma once
// Closed-form layer: Gaussian-type Fock states written as
//   exp(log_amp) * exp(Omega(z) + f),
// where Omega(z) is the quadratic creation form of a symmetric matrix z in
// the open Siegel disc and f a mode vector. Inner products, Bargmann values,
// displacement and Bogoliubov actions all stay in this parametrization, with
// amplitudes kept in log form to dodge overflow and branch flips.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <utility>

#include "canonfock/errors.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/symplectic.hpp"

namespace canonfock::fockrep {

using linops::Complex;
using linops::ComplexMatrix;
using linops::ComplexVector;

// States whose quadratic part has spectral norm above 1 - kSiegelGuard are
// refused: every closed form here contains solves that degenerate on the
// disc boundary.
inline constexpr double kSiegelGuard = 1e-9;

struct UltracoherentVector {
  Complex log_amp;
  ComplexMatrix z;
  ComplexVector f;

  UltracoherentVector(Complex log_amp_, ComplexMatrix z_, ComplexVector f_)
      : log_amp(log_amp_), z(std::move(z_)), f(std::move(f_)) {
    if (!std::isfinite(log_amp.real()) || !std::isfinite(log_amp.imag()))
      throw InvalidInput("NotFinite", "UltracoherentVector: log_amp");
    linops::require_finite(z, "UltracoherentVector");
    linops::require_symmetric(z, "UltracoherentVector", 1e-10);
    z = linops::symmetrize(z);
    if (f.size() != z.rows())
      throw InvalidInput("ShapeMismatch", "UltracoherentVector: f length vs z size");
    if (!f.allFinite()) throw InvalidInput("NotFinite", "UltracoherentVector: f");
    if (linops::spectral_norm(z) > 1.0 - kSiegelGuard)
      throw InvalidInput("SiegelViolation",
                         "UltracoherentVector: quadratic part too close to the disc boundary");
  }

  Eigen::Index modes() const { return z.rows(); }
  Complex amp() const { return std::exp(log_amp); }

  static UltracoherentVector vacuum(Eigen::Index n) {
    return UltracoherentVector(Complex(0.0, 0.0), ComplexMatrix::Zero(n, n),
                               ComplexVector::Zero(n));
  }

  // exp(f): unnormalized exponential vector, norm exp(|f|^2 / 2).
  static UltracoherentVector exponential(const ComplexVector& f) {
    return UltracoherentVector(Complex(0.0, 0.0),
                               ComplexMatrix::Zero(f.size(), f.size()), f);
  }

  // Normalized coherent state, i.e. the displaced vacuum.
  static UltracoherentVector coherent(const ComplexVector& h) {
    return UltracoherentVector(Complex(-0.5 * h.squaredNorm(), 0.0),
                               ComplexMatrix::Zero(h.size(), h.size()), h);
  }
};

// Displacement parameter for the unitary exp(b^dag(h) - b(h^*)).
struct WeylDisplacement {
  ComplexVector h;

  explicit WeylDisplacement(ComplexVector h_) : h(std::move(h_)) {
    if (!h.allFinite()) throw InvalidInput("NotFinite", "WeylDisplacement");
  }
};

namespace detail {

inline void require_same_modes(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) throw InvalidInput("ShapeMismatch", std::string(where) + ": mode counts differ");
}

// Scalar of a 1x1 (or empty) product expression.
template <typename Expr>
Complex scl(const Expr& e) {
  ComplexMatrix m(e);
  return m.size() ? m(0, 0) : Complex(0.0, 0.0);
}

}  // namespace detail

// log of <u1 | u2>. With bra data (A, f) and ket data (B, g):
//   -1/2 log det(I - A^H B)
//   + 1/2 fbar^T C fbar + fbar^T (I - B A^H)^{-1} g + 1/2 g^T D g,
//   C = (I - B A^H)^{-1} B,  D = A^H (I - B A^H)^{-1},
// plus the conjugated/plain log amplitudes. The determinant branch is the
// principal eigenvalue-log sum, which on the Siegel domain coincides with the
// analytic continuation from A = B = 0 (spectrum stays in the right half
// plane), so values are branch-unambiguous, not just defined up to sign.
inline Complex log_inner(const UltracoherentVector& u1, const UltracoherentVector& u2) {
  detail::require_same_modes(u1.modes(), u2.modes(), "log_inner");
  const Eigen::Index n = u1.modes();
  ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix ah = u1.z.adjoint();
  ComplexMatrix e = linops::inverse(eye - u2.z * ah);  // (I - B A^H)^{-1}
  ComplexMatrix c = e * u2.z;
  ComplexMatrix d = ah * e;
  ComplexVector fb = u1.f.conjugate();
  Complex quad_bra = 0.5 * detail::scl(fb.transpose() * c * fb);
  Complex cross = detail::scl(fb.transpose() * e * u2.f);
  Complex quad_ket = 0.5 * detail::scl(u2.f.transpose() * d * u2.f);
  return std::conj(u1.log_amp) + u2.log_amp - 0.5 * linops::log_det(eye - ah * u2.z) +
         quad_bra + cross + quad_ket;
}

inline Complex inner(const UltracoherentVector& u1, const UltracoherentVector& u2) {
  return std::exp(log_inner(u1, u2));
}

inline double norm(const UltracoherentVector& u) {
  return std::exp(0.5 * log_inner(u, u).real());
}

// Bargmann-picture value at the probe point w: <exp w | u>.
inline Complex bargmann(const UltracoherentVector& u, const ComplexVector& w) {
  detail::require_same_modes(u.modes(), w.size(), "bargmann");
  ComplexVector wb = w.conjugate();
  return std::exp(u.log_amp + 0.5 * detail::scl(wb.transpose() * u.z * wb) +
                  detail::scl(wb.transpose() * u.f));
}

// Displacement action: leaves z alone, shifts f by h - z conj(h), and picks
// up log-amplitude -|h|^2/2 + hbar^T z hbar / 2 - hbar^T f.
inline UltracoherentVector weyl_apply(const WeylDisplacement& w, const UltracoherentVector& u) {
  detail::require_same_modes(u.modes(), w.h.size(), "weyl_apply");
  ComplexVector hb = w.h.conjugate();
  Complex dlog = -0.5 * w.h.squaredNorm() + 0.5 * detail::scl(hb.transpose() * u.z * hb) -
                 detail::scl(hb.transpose() * u.f);
  return UltracoherentVector(u.log_amp + dlog, u.z, u.f + w.h - u.z * hb);
}

// <exp f | W(h) exp g> for plain exponential vectors.
inline Complex weyl_matrix_element(const ComplexVector& f, const ComplexVector& h,
                                   const ComplexVector& g) {
  if (f.size() != h.size() || g.size() != h.size())
    throw InvalidInput("ShapeMismatch", "weyl_matrix_element: vector lengths differ");
  return std::exp(f.dot(g) + f.dot(h) - h.dot(g) - 0.5 * h.squaredNorm());
}

// Bogoliubov action on the state. For the pair (u, v) acting on data (z, f),
// with m = u^H + z v^H:
//   z' = m^{-1} (v^T + z u^T)     (the Siegel disc action)
//   f' = m^{-1} f
//   log_amp += -1/2 log|det u| - 1/2 log det(I + v^H u^{-H} z)
//              - 1/2 f^T v^H m^{-1} f.
// |det u| enters through det(u u^H) = det(I + v v^H), real positive by
// canonicity. The second determinant has spectrum in the right half plane
// (|u^{-1} v| < 1 and |z| < 1), so the principal branch is again global.
inline UltracoherentVector transform(const symplectic::SymplecticPair& g,
                                     const UltracoherentVector& u) {
  detail::require_same_modes(g.modes(), u.modes(), "transform");
  if (!symplectic::is_canonical(g))
    throw InvalidInput("NotCanonical", "transform: pair fails the canonicity residual");
  const Eigen::Index n = u.modes();
  ComplexMatrix eye = ComplexMatrix::Identity(n, n);

  ComplexMatrix m = g.u.adjoint() + u.z * g.v.adjoint();
  ComplexMatrix znew = linops::symmetrize(linops::solve(m, g.v.transpose() + u.z * g.u.transpose()));
  if (linops::spectral_norm(znew) > 1.0 - kSiegelGuard)
    throw NumericalFailure("Singular", "transform: image too close to the disc boundary");

  ComplexVector fnew = linops::solve(m, u.f);
  ComplexMatrix w = linops::solve(g.u, g.v);  // u^{-1} v, contraction for canonical pairs
  Complex dlog = -0.25 * linops::log_det(eye + g.v * g.v.adjoint()) -
                 0.5 * linops::log_det(eye + w.adjoint() * u.z) -
                 0.5 * detail::scl(u.f.transpose() * g.v.adjoint() * fnew);
  return UltracoherentVector(u.log_amp + dlog, std::move(znew), fnew);
}

// Squeezed vacuum generated by a symmetric kernel.
inline UltracoherentVector squeeze_vacuum(const ComplexMatrix& xi) {
  symplectic::SymplecticPair g = symplectic::from_squeeze(symplectic::SqueezeGenerator(xi));
  return transform(g, UltracoherentVector::vacuum(xi.rows()));
}

// Phase relating the composed action to the action of the composition:
//   transform(g2, transform(g1, u)) = multiplier(g2, g1) * transform(compose(g2, g1), u)
// The phase does not depend on u; this is cross-checked on probe states and
// the unit-modulus postcondition is enforced.
inline Complex multiplier(const symplectic::SymplecticPair& g2,
                          const symplectic::SymplecticPair& g1) {
  detail::require_same_modes(g2.modes(), g1.modes(), "multiplier");
  const Eigen::Index n = g1.modes();
  symplectic::SymplecticPair g21 = symplectic::compose(g2, g1);

  auto ratio = [&](const UltracoherentVector& probe) {
    UltracoherentVector lhs = transform(g2, transform(g1, probe));
    UltracoherentVector rhs = transform(g21, probe);
    return std::exp(lhs.log_amp - rhs.log_amp);
  };

  Complex omega = ratio(UltracoherentVector::vacuum(n));

  // Probe independence: a displaced and a curved probe must give the same phase.
  ComplexMatrix zp = ComplexMatrix::Zero(n, n);
  ComplexVector fp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    fp(j) = Complex(0.2 + 0.1 * static_cast<double>(j % 3), -0.1);
    for (Eigen::Index k = 0; k < n; ++k)
      zp(j, k) = Complex(0.15, 0.05) / static_cast<double>(2 + j + k);
  }
  zp = linops::symmetrize(zp);
  for (const auto& probe :
       {UltracoherentVector(Complex(0.1, -0.2), ComplexMatrix::Zero(n, n), fp),
        UltracoherentVector(Complex(0.0, 0.0), zp, fp)}) {
    if (std::abs(ratio(probe) - omega) > 1e-8)
      throw NumericalFailure("ConvergenceFailure", "multiplier: probe dependence detected");
  }
  if (std::abs(std::abs(omega) - 1.0) > 1e-10)
    throw NumericalFailure("ConvergenceFailure", "multiplier: phase is not unimodular");
  return omega;
}

}  // namespace canonfock::fockrep
