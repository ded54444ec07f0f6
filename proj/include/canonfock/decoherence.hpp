#pragma once
// Decoherence probe for a two-level system coupled to a massless boson bath
// through a single real coupling vector. The continuum is reduced to a
// scalar frequency grid (the dispersion is radial), with the measure
// absorbed into the squared couplings. Everything here is a function of the
// response vector k(t) = (e^{iMt} - I) M^{-1} h with M = diag(omega).

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "canonfock/errors.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/symplectic.hpp"

namespace canonfock::decoherence {

using linops::Complex;
using linops::ComplexVector;
using linops::RealMatrix;
using linops::RealVector;

// ---------------- bath on a frequency grid ----------------

struct BathGrid {
  RealVector omegas;  // strictly positive, increasing
  RealVector h;       // real coupling weights, measure absorbed
  double beta;        // inverse temperature; 0 means vacuum (T -> 0)

  BathGrid(RealVector omegas_, RealVector h_, double beta_ = 0.0)
      : omegas(std::move(omegas_)), h(std::move(h_)), beta(beta_) {
    if (omegas.size() == 0) throw InvalidInput("InvalidConfig", "BathGrid: empty grid");
    if (h.size() != omegas.size())
      throw InvalidInput("ShapeMismatch", "BathGrid: coupling length");
    if (!omegas.allFinite() || !h.allFinite() || !std::isfinite(beta))
      throw InvalidInput("NonFinite", "BathGrid: non-finite entry");
    if (beta < 0.0) throw InvalidInput("InvalidConfig", "BathGrid: negative beta");
    for (Eigen::Index j = 0; j < omegas.size(); ++j) {
      if (omegas(j) <= 0.0)
        throw InvalidInput("InvalidConfig", "BathGrid: frequencies must be positive");
      if (j > 0 && omegas(j) <= omegas(j - 1))
        throw InvalidInput("InvalidConfig", "BathGrid: frequencies must increase");
    }
  }

  Eigen::Index size() const { return omegas.size(); }

  // 4 sum h^2/omega; the total Hamiltonian is bounded below when this is
  // <= 1. Violations are reported by callers as warnings, not errors, so
  // scaling studies stay possible.
  double semibounded_ratio() const {
    return 4.0 * (h.array().square() / omegas.array()).sum();
  }
  bool semibounded() const { return semibounded_ratio() <= 1.0; }
};

// Power-law coupling density h_j^2 = normalization * omega_j^s * dω_j on a
// log-spaced grid. s <= 1 makes ||k(t)||^2 grow without bound; s = 1 is the
// marginal (logarithmic) case.
struct CouplingFamily {
  double s;
  double omega_min;
  double omega_max;
  Eigen::Index n_points;
  double normalization;
};

inline BathGrid make_grid(const CouplingFamily& fam, double beta = 0.0) {
  if (fam.n_points < 1) throw InvalidInput("InvalidConfig", "make_grid: need n_points >= 1");
  if (!(fam.omega_min > 0.0) || !(fam.omega_max > fam.omega_min))
    throw InvalidInput("InvalidConfig", "make_grid: need 0 < omega_min < omega_max");
  if (!(fam.normalization > 0.0))
    throw InvalidInput("InvalidConfig", "make_grid: normalization must be positive");
  const Eigen::Index n = fam.n_points;
  RealVector omegas(n), h(n);
  double ratio = std::log(fam.omega_max / fam.omega_min) / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double lo = fam.omega_min * std::exp(ratio * static_cast<double>(j));
    double hi = fam.omega_min * std::exp(ratio * static_cast<double>(j + 1));
    omegas(j) = std::sqrt(lo * hi);  // geometric midpoint of the bin
    h(j) = std::sqrt(fam.normalization * std::pow(omegas(j), fam.s) * (hi - lo));
  }
  return BathGrid(std::move(omegas), std::move(h), beta);
}

// ---------------- the response vector and its norms ----------------

// k_j(t) = (e^{i omega_j t} - 1) h_j / omega_j.
inline ComplexVector k_of_t(const BathGrid& grid, double t) {
  if (t < 0.0) throw InvalidInput("InvalidConfig", "k_of_t: negative time");
  ComplexVector k(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    double w = grid.omegas(j);
    k(j) = Complex(std::cos(w * t) - 1.0, std::sin(w * t)) * (grid.h(j) / w);
  }
  return k;
}

// sum_j 2 (1 - cos omega_j t) h_j^2 / omega_j^2; grows with t only when the
// coupling density decays slowly enough at small omega.
inline double norm_kt_sq(const BathGrid& grid, double t) {
  if (t < 0.0) throw InvalidInput("InvalidConfig", "norm_kt_sq: negative time");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    double w = grid.omegas(j);
    acc += 2.0 * (1.0 - std::cos(w * t)) * grid.h(j) * grid.h(j) / (w * w);
  }
  return acc;
}

// Mode-local squeeze profile r(omega) = slope * omega.
inline RealVector r_of_omega(const BathGrid& grid, double slope) {
  return slope * grid.omegas;
}

// dalpha^2 ||cosh(r) k - sinh(r) conj(k)||^2 for a squeeze diagonal in the
// frequency-grid basis.
inline double squeezed_norm_sq(const BathGrid& grid, double t, const RealVector& r,
                               double dalpha) {
  if (r.size() != grid.size()) throw InvalidInput("ShapeMismatch", "squeezed_norm_sq: profile");
  ComplexVector k = k_of_t(grid, t);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    Complex v = std::cosh(r(j)) * k(j) - std::sinh(r(j)) * std::conj(k(j));
    acc += std::norm(v);
  }
  return dalpha * dalpha * acc;
}

// Same with a general symmetric squeeze kernel, a discretization of an
// integral operator on the frequency axis. O(n^3); intended for modest grids.
inline double squeezed_norm_sq(const BathGrid& grid, double t,
                               const symplectic::SqueezeGenerator& xi, double dalpha) {
  if (xi.modes() != grid.size()) throw InvalidInput("ShapeMismatch", "squeezed_norm_sq: kernel");
  linops::SqueezeBlocks blocks = linops::squeeze_blocks(xi.xi);  // (cosh, sinh) pair
  ComplexVector k = k_of_t(grid, t);
  ComplexVector v = blocks.u * k - blocks.v * k.conjugate();
  return dalpha * dalpha * v.squaredNorm();
}

// ---------------- decoherence function ----------------

enum class ReferenceKind { vacuum, thermal, squeezed_vacuum, squeezed_thermal };

// A reference state of the bath: vacuum or thermal, optionally squeezed
// mode-locally by the profile r.
struct ReferenceState {
  ReferenceKind kind = ReferenceKind::vacuum;
  RealVector r;  // per-grid-point squeeze; required for the squeezed kinds

  static ReferenceState vacuum() { return {ReferenceKind::vacuum, {}}; }
  static ReferenceState thermal() { return {ReferenceKind::thermal, {}}; }
  static ReferenceState squeezed_vacuum(RealVector r_) {
    return {ReferenceKind::squeezed_vacuum, std::move(r_)};
  }
  static ReferenceState squeezed_thermal(RealVector r_) {
    return {ReferenceKind::squeezed_thermal, std::move(r_)};
  }

  bool squeezed() const {
    return kind == ReferenceKind::squeezed_vacuum || kind == ReferenceKind::squeezed_thermal;
  }
  bool thermal_weighted() const {
    return kind == ReferenceKind::thermal || kind == ReferenceKind::squeezed_thermal;
  }
};

// Exponent X >= 0 in |chi| = exp(-X). Vacuum: X = (1/2) dalpha^2 ||k||^2.
// Thermal: X = dalpha^2 sum_j |k_j|^2 (n_j + 1/2) with n_j the Planck
// occupation at grid.beta. Squeezed kinds apply the same formulas to
// cosh(r) k - sinh(r) conj(k).
inline double decoherence_exponent(const BathGrid& grid, double t, double dalpha,
                                   const ReferenceState& ref) {
  if (t < 0.0) throw InvalidInput("InvalidConfig", "decoherence_exponent: negative time");
  if (ref.thermal_weighted() && grid.beta <= 0.0)
    throw InvalidInput("InvalidReference",
                       "decoherence_exponent: thermal reference needs beta > 0");
  ComplexVector k = k_of_t(grid, t);
  if (ref.squeezed()) {
    if (ref.r.size() != grid.size())
      throw InvalidInput("ShapeMismatch", "decoherence_exponent: squeeze profile");
    for (Eigen::Index j = 0; j < grid.size(); ++j)
      k(j) = std::cosh(ref.r(j)) * k(j) - std::sinh(ref.r(j)) * std::conj(k(j));
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    double occ = ref.thermal_weighted()
                     ? 1.0 / std::expm1(grid.beta * grid.omegas(j))
                     : 0.0;
    acc += std::norm(k(j)) * (occ + 0.5);
  }
  return dalpha * dalpha * acc;
}

inline double chi_magnitude(const BathGrid& grid, double t, double dalpha,
                            const ReferenceState& ref) {
  return std::exp(-decoherence_exponent(grid, t, dalpha, ref));
}

// ---------------- divergence classification ----------------

struct DivergenceReport {
  double exponent;       // fitted log-log slope of norm_kt_sq(t)
  double log_amplitude;  // fitted intercept, norm_kt_sq ~ exp(log_amplitude) t^exponent
  bool divergent;        // exponent >= 0.1 and monotone growth past t omega_max >= 10
};

// Fit the growth of ||k(t)||^2 on a time grid and classify the family.
// Probe times beyond 0.1/omega_min resolve the artificial IR cutoff and are
// discarded; at least 10 usable points are required.
inline DivergenceReport divergence_probe(const CouplingFamily& fam, const RealVector& t_grid) {
  BathGrid grid = make_grid(fam);
  const double t_cap = 0.1 / fam.omega_min;
  std::vector<double> ts, ys;
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    double t = t_grid(i);
    if (t <= 0.0 || t > t_cap) continue;
    ts.push_back(t);
    ys.push_back(norm_kt_sq(grid, t));
  }
  if (ts.size() < 10)
    throw InvalidInput("WindowTooNarrow",
                       "divergence_probe: need at least 10 points with 0 < t <= 0.1/omega_min");

  // least squares on log y = log_amplitude + exponent log t
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    double lx = std::log(ts[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  DivergenceReport rep;
  rep.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.log_amplitude = (sy - rep.exponent * sx) / n;

  // growth must persist well past the first oscillation of the fastest mode;
  // allow 2% ripple from the discrete grid
  bool monotone = true;
  bool seen = false;
  double prev = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] * fam.omega_max < 10.0) continue;
    if (seen && ys[i] < 0.98 * prev) monotone = false;
    prev = ys[i];
    seen = true;
  }
  rep.divergent = seen && monotone && rep.exponent >= 0.1;
  return rep;
}

}  // namespace canonfock::decoherence
