#include <doctest.h>

#include <algorithm>
#include <random>

#include "csop/tridiagonal.hpp"
#include "oracles.hpp"

using namespace csop;

TEST_SUITE("tridiagonal") {

TEST_CASE("symmetric eigensystem matches a dense solve for large n") {
  // n = 500 guards against LAPACK builds whose divide-and-conquer path is wrong
  for (Index n : {1, 7, 500}) {
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RVector d(n), e(std::max<Index>(n - 1, 0));
    for (auto& x : d) x = u(rng);
    for (auto& x : e) x = u(rng);
    const auto eig = tridiag::symmetric_eigensystem(d, e);
    RMatrix dense = RMatrix::Zero(n, n);
    dense.diagonal() = d;
    if (n > 1) {
      dense.diagonal(1) = e;
      dense.diagonal(-1) = e;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> ref(dense, Eigen::EigenvaluesOnly);
    CHECK((eig.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dense * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() < 1e-11);
    CHECK((eig.vectors.transpose() * eig.vectors - RMatrix::Identity(n, n)).norm() < 1e-11);
    CHECK((tridiag::symmetric_eigenvalues(d, e) - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("complex symmetric QL agrees with a general eigen solver") {
  std::mt19937_64 rng(3);
  const Index n = 80;
  const CVector d = oracle::random_complex(n, 1, rng);
  const CVector e = oracle::random_complex(n - 1, 1, rng);
  CMatrix dense = CMatrix::Zero(n, n);
  dense.diagonal() = d;
  dense.diagonal(1) = e;
  dense.diagonal(-1) = e;
  Eigen::ComplexEigenSolver<CMatrix> ref(dense, false);
  const CVector got = tridiag::complex_symmetric_eigenvalues(d, e);
  REQUIRE(got.size() == n);
  for (Index i = 0; i < n; ++i) {
    double best = 1e300;
    for (Index j = 0; j < n; ++j) best = std::min(best, std::abs(got(i) - ref.eigenvalues()(j)));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("complex symmetric singular values match dense SVD") {
  std::mt19937_64 rng(4);
  const Index n = 60;
  const CVector d = oracle::random_complex(n, 1, rng);
  const CVector e = oracle::random_complex(n - 1, 1, rng);
  CMatrix dense = CMatrix::Zero(n, n);
  dense.diagonal() = d;
  dense.diagonal(1) = e;
  dense.diagonal(-1) = e;
  const RVector got = tridiag::complex_symmetric_singular_values(d, e);
  const RVector ref = oracle::singular_values(dense);
  CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-11 * ref.maxCoeff());
}

TEST_CASE("complex tridiagonal LU solves and transposed solves") {
  std::mt19937_64 rng(5);
  const Index n = 40;
  const CVector lo = oracle::random_complex(n - 1, 1, rng);
  const CVector d = oracle::random_complex(n, 1, rng);
  const CVector up = oracle::random_complex(n - 1, 1, rng);
  CMatrix dense = CMatrix::Zero(n, n);
  dense.diagonal() = d;
  dense.diagonal(1) = up;
  dense.diagonal(-1) = lo;
  const tridiag::ComplexLU lu(lo, d, up);
  REQUIRE_FALSE(lu.singular());
  const CVector b = oracle::random_complex(n, 1, rng);
  CHECK((dense * lu.solve(b) - b).norm() < 1e-11 * b.norm() * oracle::spectral_norm(dense));
  CHECK((dense.adjoint() * lu.solve(b, true) - b).norm() < 1e-10 * b.norm() * oracle::spectral_norm(dense));
}

TEST_CASE("singular tridiagonal matrix is flagged") {
  const CVector d = CVector::Zero(3);
  const CVector off = CVector::Zero(2);
  CHECK(tridiag::ComplexLU(off, d, off).singular());
}

}
