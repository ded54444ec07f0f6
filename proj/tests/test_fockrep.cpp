#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "canonfock/errors.hpp"
#include "canonfock/fockrep.hpp"
#include "canonfock/linops.hpp"
#include "canonfock/sampling.hpp"
#include "canonfock/symplectic.hpp"
#include "support/testutil.hpp"

using canonfock::InvalidInput;
using canonfock::NumericalFailure;
using namespace canonfock::linops;
using namespace canonfock::fockrep;
namespace sampling = canonfock::sampling;
namespace symplectic = canonfock::symplectic;

namespace {

// Gauss-Hermite nodes and weights for integrals against exp(-x^2), via the
// Jacobi matrix. Used to integrate the single-mode holomorphic kernel
// representation of the inner product, a route fully independent of the
// closed form under test.
struct GaussHermite {
  std::vector<double> x, w;
  explicit GaussHermite(int n) {
    RealMatrix jac = RealMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      double off = std::sqrt(0.5 * static_cast<double>(k));
      jac(k, k - 1) = off;
      jac(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(jac);
    for (int k = 0; k < n; ++k) {
      x.push_back(es.eigenvalues()(k));
      double v0 = es.eigenvectors()(0, k);
      w.push_back(std::sqrt(M_PI) * v0 * v0);
    }
  }
};

Complex inner_by_quadrature(const UltracoherentVector& u1, const UltracoherentVector& u2) {
  static const GaussHermite gh(48);
  ComplexVector probe(1);
  Complex acc(0.0, 0.0);
  for (size_t i = 0; i < gh.x.size(); ++i) {
    for (size_t j = 0; j < gh.x.size(); ++j) {
      probe(0) = Complex(gh.x[i], gh.x[j]);
      acc += gh.w[i] * gh.w[j] * std::conj(bargmann(u1, probe)) * bargmann(u2, probe);
    }
  }
  return acc / M_PI;
}

}  // namespace

TEST_CASE("inner product matches holomorphic-kernel quadrature", "[fockrep][inner]") {
  sampling::Rng rng(41);
  for (int rep = 0; rep < 8; ++rep) {
    UltracoherentVector u1 = sampling::random_ultracoherent(rng, 1, 0.5, 0.8);
    UltracoherentVector u2 = sampling::random_ultracoherent(rng, 1, 0.5, 0.8);
    Complex got = inner(u1, u2);
    Complex want = inner_by_quadrature(u1, u2);
    REQUIRE(std::abs(got - want) <= 1e-8 * std::abs(want));  // phase sensitive
  }
}

TEST_CASE("exponential vectors reproduce the kernel", "[fockrep][inner]") {
  sampling::Rng rng(42);
  for (Eigen::Index n : {1, 3}) {
    ComplexVector f = sampling::random_vector(rng, n);
    ComplexVector g = sampling::random_vector(rng, n);
    Complex want = std::exp(f.dot(g));  // conjugates the first argument
    Complex got = inner(UltracoherentVector::exponential(f), UltracoherentVector::exponential(g));
    REQUIRE(std::abs(got - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("coherent states are normalized with the known overlap", "[fockrep][inner]") {
  sampling::Rng rng(43);
  ComplexVector h1 = sampling::random_vector(rng, 2);
  ComplexVector h2 = sampling::random_vector(rng, 2);
  REQUIRE(norm(UltracoherentVector::coherent(h1)) == Catch::Approx(1.0).epsilon(1e-12));
  Complex want = std::exp(h1.dot(h2) - 0.5 * h1.squaredNorm() - 0.5 * h2.squaredNorm());
  Complex got = inner(UltracoherentVector::coherent(h1), UltracoherentVector::coherent(h2));
  REQUIRE(std::abs(got - want) <= 1e-12);
}

TEST_CASE("norm follows the quartic-root determinant law", "[fockrep][inner]") {
  sampling::Rng rng(44);
  ComplexMatrix z = sampling::random_siegel(rng, 3, 0.6);
  UltracoherentVector u(Complex(0.0, 0.0), z, ComplexVector::Zero(3));
  double want = std::pow(
      std::abs((ComplexMatrix::Identity(3, 3) - z.adjoint() * z).determinant()), -0.25);
  REQUIRE(norm(u) == Catch::Approx(want).epsilon(1e-12));
}

TEST_CASE("zero mode states are scalars", "[fockrep]") {
  UltracoherentVector u = UltracoherentVector::vacuum(0);
  REQUIRE(norm(u) == Catch::Approx(1.0));
}

TEST_CASE("evaluation map agrees with exponential-vector pairing", "[fockrep]") {
  sampling::Rng rng(45);
  UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.5, 0.7);
  ComplexVector w = sampling::random_vector(rng, 2);
  Complex via_inner = inner(UltracoherentVector::exponential(w), u);
  REQUIRE(std::abs(bargmann(u, w) - via_inner) <= 1e-12 * std::abs(via_inner));
}

TEST_CASE("evaluation on enough probes pins the state", "[fockrep]") {
  // two states with matching evaluations everywhere must share (z, f, amp);
  // check contrapositive on a perturbed copy
  sampling::Rng rng(46);
  UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.4, 0.6);
  UltracoherentVector v(u.log_amp, u.z, u.f + ComplexVector::Constant(2, Complex(1e-6, 0.0)));
  bool differ = false;
  for (int k = 0; k < 10 && !differ; ++k) {
    ComplexVector w = sampling::random_vector(rng, 2);
    if (std::abs(bargmann(u, w) - bargmann(v, w)) > 1e-9) differ = true;
  }
  REQUIRE(differ);
}

TEST_CASE("displacement of the vacuum is the coherent state", "[fockrep][weyl]") {
  sampling::Rng rng(47);
  ComplexVector h = sampling::random_vector(rng, 3);
  UltracoherentVector got = weyl_apply(WeylDisplacement(h), UltracoherentVector::vacuum(3));
  UltracoherentVector want = UltracoherentVector::coherent(h);
  REQUIRE(std::abs(got.log_amp - want.log_amp) <= 1e-12);
  REQUIRE(testutil::max_diff(got.z, want.z) <= 1e-12);
  REQUIRE(testutil::max_diff(got.f, want.f) <= 1e-12);
}

TEST_CASE("displacements preserve norms and compose up to a phase", "[fockrep][weyl]") {
  sampling::Rng rng(48);
  UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.5, 0.7);
  ComplexVector h1 = sampling::random_vector(rng, 2);
  ComplexVector h2 = sampling::random_vector(rng, 2);

  UltracoherentVector moved = weyl_apply(WeylDisplacement(h1), u);
  REQUIRE(std::abs(norm(moved) - norm(u)) <= 1e-10 * norm(u));

  UltracoherentVector two_steps = weyl_apply(WeylDisplacement(h2), moved);
  UltracoherentVector one_step = weyl_apply(WeylDisplacement((h1 + h2).eval()), u);
  REQUIRE(testutil::max_diff(two_steps.z, one_step.z) <= 1e-12);
  REQUIRE(testutil::max_diff(two_steps.f, one_step.f) <= 1e-12);
  Complex ratio = std::exp(two_steps.log_amp - one_step.log_amp);
  REQUIRE(std::abs(std::abs(ratio) - 1.0) <= 1e-10);  // composition phase is a pure phase
}

TEST_CASE("displacement matrix elements match the two-step evaluation", "[fockrep][weyl]") {
  sampling::Rng rng(49);
  ComplexVector f = sampling::random_vector(rng, 2);
  ComplexVector g = sampling::random_vector(rng, 2);
  ComplexVector h = sampling::random_vector(rng, 2);
  Complex direct = weyl_matrix_element(f, h, g);
  Complex two_step = inner(UltracoherentVector::exponential(f),
                           weyl_apply(WeylDisplacement(h), UltracoherentVector::exponential(g)));
  REQUIRE(std::abs(direct - two_step) <= 1e-12 * std::abs(two_step));
}

TEST_CASE("transforms preserve inner products including phases", "[fockrep][transform]") {
  sampling::Rng rng(50);
  for (int rep = 0; rep < 6; ++rep) {
    symplectic::SymplecticPair g = sampling::to_pair(sampling::random_euler(rng, 2, 0.4));
    UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.4, 0.6);
    UltracoherentVector v = sampling::random_ultracoherent(rng, 2, 0.4, 0.6);
    Complex before = inner(u, v);
    Complex after = inner(transform(g, u), transform(g, v));
    REQUIRE(std::abs(after - before) <= 1e-10 * std::abs(before));
    REQUIRE(std::abs(norm(transform(g, u)) - norm(u)) <= 1e-9 * norm(u));
  }
}

TEST_CASE("transform rejects a noncanonical pair", "[fockrep][transform]") {
  symplectic::SymplecticPair g = symplectic::identity_pair(2);
  g.u(0, 0) = 1.5;
  try {
    transform(g, UltracoherentVector::vacuum(2));
    FAIL("expected a validation error");
  } catch (const InvalidInput& e) {
    REQUIRE(std::string(e.kind()) == "NotCanonical");
  }
}

TEST_CASE("squeezing the vacuum gives the hyperbolic-tangent state", "[fockrep][transform]") {
  ComplexMatrix xi(1, 1);
  xi(0, 0) = 0.8;
  UltracoherentVector u = squeeze_vacuum(xi);
  REQUIRE(std::abs(u.z(0, 0) - std::tanh(0.8)) <= 1e-12);
  REQUIRE(std::abs(u.f(0)) <= 1e-14);
  REQUIRE(std::abs(u.amp() - std::pow(std::cosh(0.8), -0.5)) <= 1e-12);
  REQUIRE(norm(u) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("squeezed vacuum norm is one for multimode generators", "[fockrep][transform]") {
  sampling::Rng rng(51);
  ComplexMatrix xi = sampling::random_symmetric(rng, 3, 0.5);
  REQUIRE(norm(squeeze_vacuum(xi)) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transforms compose up to a constant phase", "[fockrep][transform]") {
  sampling::Rng rng(52);
  symplectic::SymplecticPair g1 = sampling::to_pair(sampling::random_euler(rng, 2, 0.35));
  symplectic::SymplecticPair g2 = sampling::to_pair(sampling::random_euler(rng, 2, 0.35));
  UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.35, 0.5);
  UltracoherentVector chained = transform(g2, transform(g1, u));
  UltracoherentVector direct = transform(symplectic::compose(g2, g1), u);
  REQUIRE(testutil::max_diff(chained.z, direct.z) <= 1e-10);
  REQUIRE(testutil::max_diff(chained.f, direct.f) <= 1e-10);
  Complex ratio = std::exp(chained.log_amp - direct.log_amp);
  REQUIRE(std::abs(std::abs(ratio) - 1.0) <= 1e-10);
}

TEST_CASE("composition multiplier is a pure phase independent of the probe", "[fockrep]") {
  sampling::Rng rng(53);
  for (int rep = 0; rep < 5; ++rep) {
    symplectic::SymplecticPair g1 = sampling::to_pair(sampling::random_euler(rng, 2, 0.4));
    symplectic::SymplecticPair g2 = sampling::to_pair(sampling::random_euler(rng, 2, 0.4));
    Complex w = multiplier(g2, g1);
    REQUIRE(std::abs(std::abs(w) - 1.0) <= 1e-10);
  }
}

TEST_CASE("multiplier satisfies the cocycle identity", "[fockrep]") {
  sampling::Rng rng(54);
  symplectic::SymplecticPair g1 = sampling::to_pair(sampling::random_euler(rng, 2, 0.3));
  symplectic::SymplecticPair g2 = sampling::to_pair(sampling::random_euler(rng, 2, 0.3));
  symplectic::SymplecticPair g3 = sampling::to_pair(sampling::random_euler(rng, 2, 0.3));
  Complex lhs = multiplier(g3, symplectic::compose(g2, g1)) * multiplier(g2, g1);
  Complex rhs = multiplier(symplectic::compose(g3, g2), g1) * multiplier(g3, g2);
  REQUIRE(std::abs(lhs - rhs) <= 1e-9);
}

TEST_CASE("displacements transform covariantly under squeezes", "[fockrep][weyl]") {
  // matrix elements of S^dag W(h) S equal those of W(cosh(Xi) h - sinh(Xi) conj(h))
  sampling::Rng rng(55);
  for (int rep = 0; rep < 4; ++rep) {
    ComplexMatrix xi = sampling::random_symmetric(rng, 2, 0.4);
    symplectic::SymplecticPair g = symplectic::from_squeeze(symplectic::SqueezeGenerator(xi));
    ComplexVector h = sampling::random_vector(rng, 2, 0.7);
    UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.35, 0.5);
    UltracoherentVector v = sampling::random_ultracoherent(rng, 2, 0.35, 0.5);

    Complex lhs = inner(transform(g, u), weyl_apply(WeylDisplacement(h), transform(g, v)));
    ComplexVector gh = symplectic::apply(symplectic::inverse(g), h);
    Complex rhs = inner(u, weyl_apply(WeylDisplacement(gh), v));
    REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
  }
}

TEST_CASE("displacements transform covariantly under general pairs", "[fockrep][weyl]") {
  sampling::Rng rng(56);
  symplectic::SymplecticPair g = sampling::to_pair(sampling::random_euler(rng, 2, 0.4));
  ComplexVector h = sampling::random_vector(rng, 2, 0.7);
  UltracoherentVector u = sampling::random_ultracoherent(rng, 2, 0.35, 0.5);
  UltracoherentVector v = sampling::random_ultracoherent(rng, 2, 0.35, 0.5);
  Complex lhs = inner(transform(g, u), weyl_apply(WeylDisplacement(h), transform(g, v)));
  ComplexVector gh = symplectic::apply(symplectic::inverse(g), h);
  Complex rhs = inner(u, weyl_apply(WeylDisplacement(gh), v));
  REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
}

TEST_CASE("state constructor enforces the disc bound", "[fockrep]") {
  ComplexMatrix z = 1.2 * ComplexMatrix::Identity(2, 2);
  REQUIRE_THROWS_AS(UltracoherentVector(Complex(0, 0), z, ComplexVector::Zero(2)), InvalidInput);
}
