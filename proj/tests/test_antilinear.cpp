#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csop/antilinear.hpp"
#include "csop/error.hpp"
#include "oracles.hpp"

using namespace csop;

namespace {

double antilinear_residual(const CMatrix& t, const Conjugation& c, cplx z, const AntilinearSpectrum& s) {
  CMatrix shifted = t;
  shifted.diagonal().array() -= z;
  double worst = 0.0;
  for (Index k = 0; k < t.rows(); ++k) {
    const CVector u = s.vectors.col(k);
    worst = std::max(worst, (shifted * u - s.lambdas[k] * c.apply(u)).norm());
  }
  return worst;
}

}  // namespace

TEST_SUITE("antilinear") {

TEST_CASE("1x1: A = [i] has lambda 1 with u = +-e^{-i pi/4}") {
  CMatrix a(1, 1);
  a(0, 0) = cplx(0.0, 1.0);
  const auto s = antilinear_spectrum(a, Conjugation::entrywise(1), 0.0);
  CHECK(s.lambdas[0] == doctest::Approx(1.0));
  const cplx expected = std::polar(1.0, -std::numbers::pi / 4);
  CHECK(std::min(std::abs(s.vectors(0, 0) - expected), std::abs(s.vectors(0, 0) + expected)) < 1e-14);
}

TEST_CASE("lambdas are the singular values, vectors orthonormal") {
  std::mt19937_64 rng(11);
  for (Index n : {2, 9, 40}) {
    const CMatrix a = oracle::random_symmetric(n, rng);
    const auto s = antilinear_spectrum(a, Conjugation::entrywise(n), 0.0);
    const RVector sv = oracle::singular_values(a);
    for (Index k = 0; k < n; ++k) CHECK(s.lambdas[k] == doctest::Approx(sv(k)).epsilon(1e-11));
    CHECK(antilinear_residual(a, Conjugation::entrywise(n), 0.0, s) < 1e-11 * sv.maxCoeff());
    CHECK((s.vectors.adjoint() * s.vectors - CMatrix::Identity(n, n)).norm() < 1e-11);
  }
}

TEST_CASE("identity: one degenerate cluster, residual intact") {
  const Index n = 6;
  const CMatrix a = CMatrix::Identity(n, n);
  const auto s = antilinear_spectrum(a, Conjugation::entrywise(n), 0.0);
  CHECK(s.degenerate_clusters == 1);
  CHECK(antilinear_residual(a, Conjugation::entrywise(n), 0.0, s) < 1e-12);
  CHECK((s.vectors.adjoint() * s.vectors - CMatrix::Identity(n, n)).norm() < 1e-12);
}

TEST_CASE("rank-deficient matrix: kernel vectors orthonormal") {
  std::mt19937_64 rng(12);
  const CMatrix b = oracle::random_complex(5, 2, rng);
  const CMatrix a = b * b.transpose();  // symmetric, rank 2
  const auto s = antilinear_spectrum(a, Conjugation::entrywise(5), 0.0);
  for (int k = 0; k < 3; ++k) CHECK(s.lambdas[k] == 0.0);
  CHECK((a * s.vectors.leftCols(3)).norm() < 1e-12 * oracle::spectral_norm(a));
  CHECK((s.vectors.adjoint() * s.vectors - CMatrix::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("takagi reconstructs A with unitary U") {
  std::mt19937_64 rng(13);
  const ComplexSymmetricMatrix a(oracle::random_symmetric(25, rng));
  const auto tk = takagi(a);
  const RVector s = Eigen::Map<const RVector>(tk.sigma.data(), 25);
  CHECK((tk.u * s.asDiagonal() * tk.u.transpose() - a.matrix()).norm() < 1e-11 * s(0));
  CHECK((tk.u.adjoint() * tk.u - CMatrix::Identity(25, 25)).norm() < 1e-11);
  CHECK(std::is_sorted(tk.sigma.rbegin(), tk.sigma.rend()));
}

TEST_CASE("resolvent norm equals the inverse's spectral norm") {
  std::mt19937_64 rng(14);
  const CMatrix a = oracle::random_symmetric(30, rng);
  const cplx z(0.3, -0.7);
  const double got = resolvent_norm(a, Conjugation::entrywise(30), z);
  CHECK(got == doctest::Approx(oracle::resolvent_norm_by_inverse(a, z)).epsilon(1e-9));
}

TEST_CASE("resolvent norm at an eigenvalue is a singular shift") {
  CMatrix a = CMatrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  try {
    resolvent_norm(a, Conjugation::entrywise(3), 2.0);
    FAIL("expected singular_shift");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_shift);
  }
}

TEST_CASE("non-symmetric input is rejected") {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  try {
    antilinear_spectrum(a, Conjugation::entrywise(2), 0.0);
    FAIL("expected not_c_symmetric");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_c_symmetric);
  }
  CHECK_THROWS_AS(antilinear_spectrum(a, Conjugation::entrywise(3), 0.0), Error);
}

TEST_CASE("general conjugation: P-symmetric matrix") {
  std::mt19937_64 rng(15);
  const Index n = 8;
  // P = symmetric unitary from a Takagi-like construction Q Q^T, Q unitary
  Eigen::HouseholderQR<CMatrix> qr(oracle::random_complex(n, n, rng));
  const CMatrix q = qr.householderQ();
  const CMatrix p = q * q.transpose();
  const Conjugation c(p);
  const CMatrix s = oracle::random_symmetric(n, rng);
  const CMatrix t = p * s;  // conj(P) t = conj(P) P s = s is symmetric
  const auto spec = antilinear_spectrum(t, c, 0.0);
  const RVector sv = oracle::singular_values(t);
  for (Index k = 0; k < n; ++k) CHECK(spec.lambdas[k] == doctest::Approx(sv(k)).epsilon(1e-10));
  CHECK(antilinear_residual(t, c, 0.0, spec) < 1e-10 * sv.maxCoeff());
}

TEST_CASE("invalid conjugations are rejected") {
  CMatrix p(2, 2);
  p << 0.0, 1.0, 0.5, 0.0;
  CHECK_THROWS_AS(Conjugation{p}, Error);
  p << 2.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(Conjugation{p}, Error);
}

TEST_CASE("block embedding: doubled singular values of a non-normal M") {
  std::mt19937_64 rng(16);
  const CMatrix m = oracle::random_complex(7, 7, rng);
  const auto pair = block_embed(m);
  const auto spec = antilinear_spectrum(pair.op, pair.conj, 0.0);
  const RVector sv = oracle::singular_values(m);
  for (Index k = 0; k < 7; ++k) {
    CHECK(spec.lambdas[2 * k] == doctest::Approx(sv(k)).epsilon(1e-10));
    CHECK(spec.lambdas[2 * k + 1] == doctest::Approx(sv(k)).epsilon(1e-10));
  }
}

TEST_CASE("min-max: n = 0 gives the norm, even indices are lower bounds") {
  std::mt19937_64 rng(17);
  const ComplexSymmetricMatrix a(oracle::random_symmetric(12, rng));
  CHECK(minmax_norm(a) == doctest::Approx(oracle::spectral_norm(a.matrix())).epsilon(1e-12));
  for (int n : {0, 1, 3, 5}) {
    const auto check = minmax_even_lower_check(a, n, 20);
    CHECK(check.passed);
  }
  CHECK_THROWS_AS(minmax_even_lower_check(a, 6, 1), Error);
}

TEST_CASE("real doubling spectrum is +-sigma") {
  std::mt19937_64 rng(18);
  const CMatrix a = oracle::random_symmetric(5, rng);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(real_doubling(a).s, Eigen::EigenvaluesOnly);
  const RVector sv = oracle::singular_values(a);
  for (Index k = 0; k < 5; ++k) {
    CHECK(solver.eigenvalues()(5 + k) == doctest::Approx(sv(k)).epsilon(1e-12));
    CHECK(solver.eigenvalues()(4 - k) == doctest::Approx(-sv(k)).epsilon(1e-12));
  }
}

}
