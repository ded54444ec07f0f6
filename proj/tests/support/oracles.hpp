#pragma once
// Independent reference computations for the tests. These deliberately avoid
// the algorithms used by the library (no Takagi factorization, no closed-form
// grid sums), so agreement is evidence rather than tautology.

#include <cmath>
#include <stdexcept>

#include "canonfock/linops.hpp"

namespace oracles {

using canonfock::linops::ComplexMatrix;

struct HyperbolicBlocks {
  ComplexMatrix cosh_block;
  ComplexMatrix sinh_block;
};

// Power series: cosh block = sum_k (Xi conj(Xi))^k / (2k)!, sinh block =
// sum_k (Xi conj(Xi))^k Xi / (2k+1)!. Plain term-by-term summation; valid
// for moderate norms, which is all the tests use.
inline HyperbolicBlocks hyperbolic_series(const ComplexMatrix& xi, int terms = 40) {
  const auto n = xi.rows();
  ComplexMatrix prod = xi * xi.conjugate();
  ComplexMatrix cosh_acc = ComplexMatrix::Identity(n, n);
  ComplexMatrix sinh_acc = xi;
  ComplexMatrix cosh_term = cosh_acc;
  ComplexMatrix sinh_term = sinh_acc;
  for (int k = 1; k <= terms; ++k) {
    double c2k = static_cast<double>(2 * k) * static_cast<double>(2 * k - 1);
    double s2k = static_cast<double>(2 * k) * static_cast<double>(2 * k + 1);
    cosh_term = (cosh_term * prod / c2k).eval();
    sinh_term = (prod * sinh_term / s2k).eval();
    cosh_acc += cosh_term;
    sinh_acc += sinh_term;
    if (cosh_term.cwiseAbs().maxCoeff() < 1e-18 && sinh_term.cwiseAbs().maxCoeff() < 1e-18)
      break;
  }
  return {cosh_acc, sinh_acc};
}

// integral of 2 N (1 - cos(w t)) w^(s-2) dw over [wmin, wmax], split at the
// half-periods k pi / t so composite Simpson sees smooth pieces.
inline double quad_response_norm(double s, double normalization, double wmin, double wmax,
                                 double t) {
  if (!(t > 0.0) || !(wmin > 0.0) || !(wmax > wmin))
    throw std::invalid_argument("quad_response_norm: bad window");
  auto f = [&](double w) {
    return 2.0 * normalization * (1.0 - std::cos(w * t)) * std::pow(w, s - 2.0);
  };
  auto simpson = [&](double a, double b) {
    const int n = 64;  // even
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  double total = 0.0;
  double seg = M_PI / t;
  double lo = wmin;
  long k = static_cast<long>(std::floor(wmin / seg)) + 1;
  while (lo < wmax) {
    double hi = std::min(wmax, static_cast<double>(k) * seg);
    if (hi > lo) total += simpson(lo, hi);
    lo = hi;
    ++k;
  }
  return total;
}

}  // namespace oracles
