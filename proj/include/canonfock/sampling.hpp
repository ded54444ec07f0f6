#pragma once
// Deterministic pseudo-random inputs for tests and demo runs. The engine is
// seeded explicitly and the uniform draw uses a fixed 53-bit construction,
// so sequences are identical across platforms and standard libraries.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>

#include "canonfock/fockrep.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/symplectic.hpp"

namespace canonfock::sampling {

using linops::Complex;
using linops::ComplexMatrix;
using linops::ComplexVector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex complex_box(double scale = 1.0) {
    double re = uniform(-scale, scale);
    return Complex(re, uniform(-scale, scale));
  }

 private:
  std::mt19937_64 eng_;
};

inline ComplexVector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_box(scale);
  return v;
}

inline ComplexMatrix random_matrix(Rng& rng, Eigen::Index n, double scale = 1.0) {
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.complex_box(scale);
  return m;
}

inline ComplexMatrix random_symmetric(Rng& rng, Eigen::Index n, double scale = 1.0) {
  ComplexMatrix m = random_matrix(rng, n, scale);
  return 0.5 * (m + m.transpose()).eval();
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n, double scale = 1.0) {
  ComplexMatrix m = random_matrix(rng, n, scale);
  return 0.5 * (m + m.adjoint()).eval();
}

// Symmetric matrix rescaled to the requested spectral norm, strictly inside
// the unit disc for radius < 1.
inline ComplexMatrix random_siegel(Rng& rng, Eigen::Index n, double radius) {
  ComplexMatrix m = random_symmetric(rng, n);
  double s = linops::spectral_norm(m);
  if (s == 0.0) return ComplexMatrix::Zero(n, n);
  return (radius / s) * m;
}

inline fockrep::UltracoherentVector random_ultracoherent(Rng& rng, Eigen::Index n,
                                                         double z_radius, double f_scale) {
  ComplexMatrix z = random_siegel(rng, n, z_radius);
  ComplexVector f = random_vector(rng, n, f_scale);
  return fockrep::UltracoherentVector(rng.complex_box(0.3), std::move(z), std::move(f));
}

// A canonical pair in rotation-squeeze-rotation form; every pair close to
// the identity arises this way, and the factors map directly onto the
// generator exponentials used by the brute-force route.
struct EulerCase {
  ComplexMatrix psi_left;   // hermitian
  ComplexMatrix xi;         // symmetric
  ComplexMatrix psi_right;  // hermitian
};

inline EulerCase random_euler(Rng& rng, Eigen::Index n, double r_scale,
                              double psi_scale = 1.0) {
  EulerCase e;
  e.psi_left = random_hermitian(rng, n, psi_scale);
  e.xi = random_symmetric(rng, n, r_scale);
  e.psi_right = random_hermitian(rng, n, psi_scale);
  return e;
}

inline symplectic::SymplecticPair to_pair(const EulerCase& e) {
  return symplectic::compose(
      symplectic::from_rotation(symplectic::RotationGenerator(e.psi_left)),
      symplectic::compose(symplectic::from_squeeze(symplectic::SqueezeGenerator(e.xi)),
                          symplectic::from_rotation(symplectic::RotationGenerator(e.psi_right))));
}

}  // namespace canonfock::sampling
