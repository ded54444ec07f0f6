#pragma once
// Brute-force route: truncated occupation-number basis, dense ladder
// operators, generator matrices, matrix exponentials and exponential actions,
// and embedding of the closed-form states for side-by-side comparison. This
// module exists to audit fockrep, so it deliberately shares no formulas with
// it beyond the state definition.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "canonfock/errors.hpp"
#include "canonfock/fockrep.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/symplectic.hpp"

namespace canonfock::fockoracle {

using linops::Complex;
using linops::ComplexMatrix;
using linops::ComplexVector;

inline constexpr Eigen::Index kDefaultMaxDim = 250000;

// Dimension cap, overridable through the CANONFOCK_MAX_DIM environment
// variable (strictly positive integer).
inline Eigen::Index max_dim_cap() {
  const char* env = std::getenv("CANONFOCK_MAX_DIM");
  if (env == nullptr || *env == '\0') return kDefaultMaxDim;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v <= 0)
    throw InvalidInput("InvalidConfig", "CANONFOCK_MAX_DIM must be a positive integer");
  return static_cast<Eigen::Index>(v);
}

// Truncated basis: occupations 0..cutoff per mode, flattened row-major with
// mode 0 slowest.
struct FockBasis {
  Eigen::Index n_modes;
  Eigen::Index cutoff;
  Eigen::Index dim;

  FockBasis(Eigen::Index n_modes_, Eigen::Index cutoff_)
      : n_modes(n_modes_), cutoff(cutoff_) {
    if (n_modes < 1) throw InvalidInput("InvalidConfig", "FockBasis: need at least one mode");
    if (cutoff < 0) throw InvalidInput("InvalidConfig", "FockBasis: negative cutoff");
    double d = std::pow(static_cast<double>(cutoff + 1), static_cast<double>(n_modes));
    Eigen::Index cap = max_dim_cap();
    if (d > static_cast<double>(cap))
      throw InvalidInput("DimensionCap", "FockBasis: dimension " + std::to_string(d) +
                                             " exceeds cap " + std::to_string(cap));
    dim = static_cast<Eigen::Index>(d + 0.5);
  }

  bool operator==(const FockBasis& o) const {
    return n_modes == o.n_modes && cutoff == o.cutoff;
  }

  Eigen::Index stride(Eigen::Index mode) const {
    Eigen::Index s = 1;
    for (Eigen::Index m = n_modes - 1; m > mode; --m) s *= cutoff + 1;
    return s;
  }

  std::vector<Eigen::Index> occupation(Eigen::Index index) const {
    if (index < 0 || index >= dim) throw InvalidInput("IndexOutOfRange", "FockBasis::occupation");
    std::vector<Eigen::Index> n(n_modes);
    for (Eigen::Index m = n_modes - 1; m >= 0; --m) {
      n[m] = index % (cutoff + 1);
      index /= cutoff + 1;
    }
    return n;
  }

  Eigen::Index index(const std::vector<Eigen::Index>& occ) const {
    if (static_cast<Eigen::Index>(occ.size()) != n_modes)
      throw InvalidInput("ShapeMismatch", "FockBasis::index: occupation length");
    Eigen::Index idx = 0;
    for (Eigen::Index m = 0; m < n_modes; ++m) {
      if (occ[m] < 0 || occ[m] > cutoff)
        throw InvalidInput("IndexOutOfRange", "FockBasis::index: occupation out of range");
      idx = idx * (cutoff + 1) + occ[m];
    }
    return idx;
  }
};

struct FockVector {
  FockBasis basis;
  ComplexVector coeffs;

  FockVector(FockBasis b, ComplexVector c) : basis(b), coeffs(std::move(c)) {
    if (coeffs.size() != basis.dim)
      throw InvalidInput("ShapeMismatch", "FockVector: coefficient length");
  }

  static FockVector zero(const FockBasis& b) {
    return FockVector(b, ComplexVector::Zero(b.dim));
  }
};

struct FockOperator {
  FockBasis basis;
  ComplexMatrix matrix;

  FockOperator(FockBasis b, ComplexMatrix m) : basis(b), matrix(std::move(m)) {
    if (matrix.rows() != basis.dim || matrix.cols() != basis.dim)
      throw InvalidInput("ShapeMismatch", "FockOperator: matrix shape");
  }
};

// ---------------- ladder operators and generators ----------------

// Lowering and raising matrices for one mode. Entries above the cutoff are
// dropped, which makes every generator below agree exactly with products of
// these truncated matrices.
inline std::pair<ComplexMatrix, ComplexMatrix> ladder(const FockBasis& basis,
                                                      Eigen::Index mode) {
  if (mode < 0 || mode >= basis.n_modes)
    throw InvalidInput("IndexOutOfRange", "ladder: mode index");
  ComplexMatrix lower = ComplexMatrix::Zero(basis.dim, basis.dim);
  Eigen::Index s = basis.stride(mode);
  for (Eigen::Index i = 0; i < basis.dim; ++i) {
    Eigen::Index occ = (i / s) % (basis.cutoff + 1);
    if (occ > 0) lower(i - s, i) = std::sqrt(static_cast<double>(occ));
  }
  ComplexMatrix raise = lower.adjoint();
  return {std::move(lower), std::move(raise)};
}

// Anti-hermitian rotation generator i sum_{mn} psi_{mn} b^dag_m b_n for
// hermitian psi; its exponential implements the mode rotation e^{i psi}.
// Assembled entrywise; equals i times the sum of truncated ladder products.
inline FockOperator quad_rotation_gen(const FockBasis& basis, const ComplexMatrix& psi) {
  linops::require_hermitian(psi, "quad_rotation_gen");
  if (psi.rows() != basis.n_modes)
    throw InvalidInput("ShapeMismatch", "quad_rotation_gen: generator size");
  ComplexMatrix k = ComplexMatrix::Zero(basis.dim, basis.dim);
  std::vector<Eigen::Index> stride(basis.n_modes);
  for (Eigen::Index m = 0; m < basis.n_modes; ++m) stride[m] = basis.stride(m);
  for (Eigen::Index i = 0; i < basis.dim; ++i) {
    auto occ = basis.occupation(i);
    for (Eigen::Index nu = 0; nu < basis.n_modes; ++nu) {
      if (occ[nu] == 0) continue;
      for (Eigen::Index mu = 0; mu < basis.n_modes; ++mu) {
        if (psi(mu, nu) == Complex(0.0, 0.0)) continue;
        Eigen::Index raised = occ[mu] + (mu == nu ? 0 : 1);
        if (raised > basis.cutoff) continue;
        Eigen::Index j = i - stride[nu] + stride[mu];
        double amp = std::sqrt(static_cast<double>(occ[nu]) * static_cast<double>(raised));
        k(j, i) += Complex(0.0, 1.0) * psi(mu, nu) * amp;
      }
    }
  }
  return FockOperator(basis, std::move(k));
}

// Anti-hermitian squeeze generator
//   (1/2) sum_{mn} xi_{mn} b^dag_m b^dag_n - (1/2) sum_{mn} conj(xi_{mn}) b_m b_n.
// Intermediate states above the cutoff are dropped, matching the products of
// truncated ladder matrices.
inline FockOperator quad_squeeze_gen(const FockBasis& basis, const ComplexMatrix& xi) {
  linops::require_symmetric(xi, "quad_squeeze_gen", 1e-10);
  if (xi.rows() != basis.n_modes)
    throw InvalidInput("ShapeMismatch", "quad_squeeze_gen: generator size");
  ComplexMatrix k = ComplexMatrix::Zero(basis.dim, basis.dim);
  std::vector<Eigen::Index> stride(basis.n_modes);
  for (Eigen::Index m = 0; m < basis.n_modes; ++m) stride[m] = basis.stride(m);
  for (Eigen::Index i = 0; i < basis.dim; ++i) {
    auto occ = basis.occupation(i);
    for (Eigen::Index mu = 0; mu < basis.n_modes; ++mu) {
      for (Eigen::Index nu = 0; nu < basis.n_modes; ++nu) {
        if (xi(mu, nu) == Complex(0.0, 0.0)) continue;
        // raising part: b^dag_mu b^dag_nu applied right-to-left
        Eigen::Index n_nu = occ[nu];
        Eigen::Index n_mu = occ[mu] + (mu == nu ? 1 : 0);
        if (n_nu + 1 <= basis.cutoff && n_mu + 1 <= basis.cutoff) {
          Eigen::Index j = i + stride[nu] + stride[mu];
          double amp = std::sqrt(static_cast<double>(n_nu + 1) * static_cast<double>(n_mu + 1));
          k(j, i) += 0.5 * xi(mu, nu) * amp;
        }
        // lowering part: b_mu b_nu
        Eigen::Index l_nu = occ[nu];
        Eigen::Index l_mu = occ[mu] - (mu == nu ? 1 : 0);
        if (l_nu >= 1 && l_mu >= 1) {
          Eigen::Index j = i - stride[nu] - stride[mu];
          double amp = std::sqrt(static_cast<double>(l_nu) * static_cast<double>(l_mu));
          k(j, i) -= 0.5 * std::conj(xi(mu, nu)) * amp;
        }
      }
    }
  }
  return FockOperator(basis, std::move(k));
}

// Anti-hermitian displacement generator sum_m h_m b^dag_m - conj(h_m) b_m.
inline FockOperator weyl_gen(const FockBasis& basis, const ComplexVector& h) {
  if (h.size() != basis.n_modes) throw InvalidInput("ShapeMismatch", "weyl_gen: vector length");
  ComplexMatrix k = ComplexMatrix::Zero(basis.dim, basis.dim);
  for (Eigen::Index m = 0; m < basis.n_modes; ++m) {
    Eigen::Index s = basis.stride(m);
    for (Eigen::Index i = 0; i < basis.dim; ++i) {
      Eigen::Index occ = (i / s) % (basis.cutoff + 1);
      if (occ + 1 <= basis.cutoff)
        k(i + s, i) += h(m) * std::sqrt(static_cast<double>(occ + 1));
      if (occ > 0) k(i - s, i) -= std::conj(h(m)) * std::sqrt(static_cast<double>(occ));
    }
  }
  return FockOperator(basis, std::move(k));
}

// ---------------- exponentials ----------------

// Dense matrix exponential (scaling and squaring). Refuses norms for which
// exp would overflow into meaningless magnitudes.
inline FockOperator mat_exp(const FockOperator& op) {
  double n1 = op.matrix.cwiseAbs().colwise().sum().maxCoeff();
  if (n1 > 500.0)
    throw NumericalFailure("Overflow", "mat_exp: operator norm " + std::to_string(n1));
  return FockOperator(op.basis, op.matrix.exp());
}

// exp(op) * vec without forming exp(op): scale so the substep norm is modest,
// then accumulate the Taylor series by matrix-vector products. The generator
// matrices here are extremely sparse, so the nonzero entries are walked
// directly.
inline ComplexVector exp_apply(const FockOperator& op, const ComplexVector& vec,
                               double tol = 1e-15) {
  if (vec.size() != op.basis.dim) throw InvalidInput("ShapeMismatch", "exp_apply: vector length");
  const Eigen::Index dim = op.basis.dim;

  struct Entry {
    Eigen::Index row, col;
    Complex val;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(dim) * 8);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      if (op.matrix(r, c) != Complex(0.0, 0.0)) entries.push_back({r, c, op.matrix(r, c)});

  double n1 = op.matrix.cwiseAbs().colwise().sum().maxCoeff();
  if (n1 > 500.0)
    throw NumericalFailure("Overflow", "exp_apply: operator norm " + std::to_string(n1));
  int s = 0;
  double scaled = n1;
  while (scaled > 2.0 && s < 40) {
    scaled *= 0.5;
    ++s;
  }
  double factor = std::ldexp(1.0, -s);

  ComplexVector acc = vec;
  ComplexVector term(dim), next(dim);
  for (long sub = 0; sub < (1L << s); ++sub) {
    term = acc;
    for (int k = 1; k <= 60; ++k) {
      next.setZero();
      for (const Entry& e : entries) next(e.row) += e.val * term(e.col);
      term = next * (factor / static_cast<double>(k));
      acc += term;
      if (term.cwiseAbs().maxCoeff() <= tol * std::max(1.0, acc.cwiseAbs().maxCoeff())) break;
      if (k == 60)
        throw NumericalFailure("ConvergenceFailure", "exp_apply: Taylor series did not settle");
    }
  }
  return acc;
}

// ---------------- embedding closed-form states ----------------

struct EmbedResult {
  FockVector vec;
  double truncation_weight;  // missing analytic norm fraction, in [0, 1]
};

// Expand exp(log_amp) exp(Omega(z) + f) in the truncated basis. The series
// only raises occupation, so truncation at each step equals the exact
// projection of the untruncated state; the dropped weight is computed from
// the closed-form norm.
inline EmbedResult embed(const fockrep::UltracoherentVector& u, const FockBasis& basis,
                         double weight_limit = 1e-8) {
  if (u.modes() != basis.n_modes)
    throw InvalidInput("ShapeMismatch", "embed: mode counts differ");
  const Eigen::Index dim = basis.dim;
  std::vector<Eigen::Index> stride(basis.n_modes);
  for (Eigen::Index m = 0; m < basis.n_modes; ++m) stride[m] = basis.stride(m);

  // One application of the raising form (1/2) b^dag z b^dag + b^dag(f).
  auto raise = [&](const ComplexVector& x) {
    ComplexVector y = ComplexVector::Zero(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (x(i) == Complex(0.0, 0.0)) continue;
      auto occ = basis.occupation(i);
      for (Eigen::Index mu = 0; mu < basis.n_modes; ++mu) {
        if (occ[mu] + 1 <= basis.cutoff && u.f(mu) != Complex(0.0, 0.0))
          y(i + stride[mu]) +=
              u.f(mu) * std::sqrt(static_cast<double>(occ[mu] + 1)) * x(i);
        for (Eigen::Index nu = mu; nu < basis.n_modes; ++nu) {
          Complex zc = u.z(mu, nu);
          if (zc == Complex(0.0, 0.0)) continue;
          if (mu == nu) {
            if (occ[mu] + 2 > basis.cutoff) continue;
            double amp = std::sqrt(static_cast<double>((occ[mu] + 1) * (occ[mu] + 2)));
            y(i + 2 * stride[mu]) += 0.5 * zc * amp * x(i);
          } else {
            if (occ[mu] + 1 > basis.cutoff || occ[nu] + 1 > basis.cutoff) continue;
            double amp =
                std::sqrt(static_cast<double>((occ[mu] + 1) * (occ[nu] + 1)));
            y(i + stride[mu] + stride[nu]) += zc * amp * x(i);
          }
        }
      }
    }
    return y;
  };

  ComplexVector acc = ComplexVector::Zero(dim);
  acc(0) = Complex(1.0, 0.0);
  ComplexVector term = acc;
  const Eigen::Index kmax = basis.n_modes * basis.cutoff + 1;
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    term = raise(term) / static_cast<double>(k);
    if (term.isZero(0.0)) break;
    acc += term;
  }
  acc *= u.amp();

  double analytic_sq = std::exp(fockrep::log_inner(u, u).real());
  double weight = 1.0 - acc.squaredNorm() / analytic_sq;
  if (weight < 0.0) weight = 0.0;
  if (weight > weight_limit)
    throw NumericalFailure("CutoffTooSmall", "embed: truncation weight " +
                                                 std::to_string(weight) + " above limit " +
                                                 std::to_string(weight_limit));
  return EmbedResult{FockVector(basis, std::move(acc)), weight};
}

// ---------------- closed form vs brute force ----------------

struct OracleReport {
  std::string case_name;
  Eigen::Index cutoff;
  double overlap_error;      // 1 - |<a|b>| / (|a| |b|), or relative error for inner cases
  double norm_error;         // | |a| - |b| | / |b|
  double truncation_weight;  // largest embedding weight encountered
};

namespace detail {

inline OracleReport report_from_vectors(std::string name, const FockBasis& basis,
                                        const ComplexVector& analytic,
                                        const ComplexVector& brute, double weight) {
  double na = analytic.norm();
  double nb = brute.norm();
  Complex ov = analytic.dot(brute);
  OracleReport rep;
  rep.case_name = std::move(name);
  rep.cutoff = basis.cutoff;
  rep.overlap_error = 1.0 - std::abs(ov) / (na * nb);
  rep.norm_error = std::abs(na - nb) / nb;
  rep.truncation_weight = weight;
  return rep;
}

}  // namespace detail

// Bogoliubov action, closed form vs chained generator exponentials. The
// transformation is handed over in generator (Euler) form: a rotation, then a
// squeeze, then a rotation, applied to u right-to-left.
inline OracleReport compare_transform(const FockBasis& basis, const ComplexMatrix& psi_left,
                                      const ComplexMatrix& xi, const ComplexMatrix& psi_right,
                                      const fockrep::UltracoherentVector& u,
                                      double weight_limit = 1e-8) {
  namespace sp = canonfock::symplectic;
  sp::SymplecticPair g = sp::compose(
      sp::from_rotation(sp::RotationGenerator(psi_left)),
      sp::compose(sp::from_squeeze(sp::SqueezeGenerator(xi)),
                  sp::from_rotation(sp::RotationGenerator(psi_right))));

  EmbedResult analytic = embed(fockrep::transform(g, u), basis, weight_limit);
  EmbedResult start = embed(u, basis, weight_limit);

  ComplexVector brute = start.vec.coeffs;
  brute = exp_apply(quad_rotation_gen(basis, psi_right), brute);
  brute = exp_apply(quad_squeeze_gen(basis, xi), brute);
  brute = exp_apply(quad_rotation_gen(basis, psi_left), brute);

  return detail::report_from_vectors("transform", basis, analytic.vec.coeffs, brute,
                                     std::max(analytic.truncation_weight,
                                              start.truncation_weight));
}

// Displacement action, closed form vs exponential of the generator. Phases
// agree exactly here, so the overlap error is phase sensitive through |<a|b>|.
inline OracleReport compare_weyl(const FockBasis& basis, const ComplexVector& h,
                                 const fockrep::UltracoherentVector& u,
                                 double weight_limit = 1e-8) {
  EmbedResult analytic =
      embed(fockrep::weyl_apply(fockrep::WeylDisplacement(h), u), basis, weight_limit);
  EmbedResult start = embed(u, basis, weight_limit);
  ComplexVector brute = exp_apply(weyl_gen(basis, h), start.vec.coeffs);
  return detail::report_from_vectors("weyl", basis, analytic.vec.coeffs, brute,
                                     std::max(analytic.truncation_weight,
                                              start.truncation_weight));
}

// Closed-form inner product vs the coefficient-space dot product of the
// embedded states; phase sensitive.
inline OracleReport compare_inner(const FockBasis& basis, const fockrep::UltracoherentVector& u1,
                                  const fockrep::UltracoherentVector& u2,
                                  double weight_limit = 1e-8) {
  EmbedResult e1 = embed(u1, basis, weight_limit);
  EmbedResult e2 = embed(u2, basis, weight_limit);
  Complex analytic = fockrep::inner(u1, u2);
  Complex brute = e1.vec.coeffs.dot(e2.vec.coeffs);
  OracleReport rep;
  rep.case_name = "inner";
  rep.cutoff = basis.cutoff;
  rep.overlap_error = std::abs(analytic - brute) / std::abs(brute);
  rep.norm_error = std::abs(fockrep::norm(u1) - e1.vec.coeffs.norm()) / e1.vec.coeffs.norm();
  rep.truncation_weight = std::max(e1.truncation_weight, e2.truncation_weight);
  return rep;
}

// Squeezed vacuum, closed form vs exponential of the squeeze generator on
// the vacuum unit vector.
inline OracleReport compare_squeeze_vacuum(const FockBasis& basis, const ComplexMatrix& xi,
                                           double weight_limit = 1e-8) {
  EmbedResult analytic = embed(fockrep::squeeze_vacuum(xi), basis, weight_limit);
  ComplexVector vac = ComplexVector::Zero(basis.dim);
  vac(0) = Complex(1.0, 0.0);
  ComplexVector brute = exp_apply(quad_squeeze_gen(basis, xi), vac);
  return detail::report_from_vectors("squeeze_vacuum", basis, analytic.vec.coeffs, brute,
                                     analytic.truncation_weight);
}

}  // namespace canonfock::fockoracle
