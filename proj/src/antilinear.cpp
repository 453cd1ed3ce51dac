#include "csop/antilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csop/error.hpp"
#include "csop/linalg.hpp"

namespace csop {

namespace {

constexpr double kClusterRelTol = 1e-10;
constexpr double kSymmetryRelTol = 1e-10;
constexpr double kSingularRelTol = 1e-13;
constexpr double kConjugationTol = 1e-12;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(Errc::invalid_argument, std::string(what) + ": expected a non-empty square matrix, got " +
                                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

// index of the largest-magnitude entry, first one on ties
Index dominant_entry(const CVector& u) {
  Index best = 0;
  for (Index i = 1; i < u.size(); ++i)
    if (std::abs(u(i)) > std::abs(u(best))) best = i;
  return best;
}

// For lambda > 0 only the sign is free; for lambda = 0 any phase is.
void fix_phase(CVector& u, bool free_phase) {
  const cplx lead = u(dominant_entry(u));
  if (std::abs(lead) == 0.0) return;
  if (free_phase) {
    u *= std::conj(lead) / std::abs(lead);
    return;
  }
  if (lead.real() < 0.0 || (lead.real() == 0.0 && lead.imag() < 0.0)) u = -u;
}

CVector as_complex(const RMatrix& w, Index col, Index n) {
  CVector u(n);
  for (Index i = 0; i < n; ++i) u(i) = cplx(w(i, col), w(n + i, col));
  return u;
}

struct Reduced {
  CMatrix a;     // conj(P) (T - z I), symmetrized
  double scale;  // ||T||, floored
};

Reduced reduce(const CMatrix& t, const Conjugation& conj, cplx z) {
  require_square(t, "antilinear_spectrum");
  if (conj.dim() != t.rows())
    throw Error(Errc::invalid_argument, "conjugation dimension " + std::to_string(conj.dim()) +
                                            " does not match matrix dimension " + std::to_string(t.rows()));
  if (!t.allFinite()) throw Error(Errc::invalid_argument, "matrix has non-finite entries");
  Reduced r;
  r.scale = std::max(operator_norm_estimate(t), kNormFloor);
  CMatrix shifted = t;
  shifted.diagonal().array() -= z;
  r.a = conj.is_entrywise() ? shifted : CMatrix(conj.p().conjugate() * shifted);
  const double asym = max_asymmetry(r.a);
  if (asym > kSymmetryRelTol * r.scale)
    throw Error(Errc::not_c_symmetric, "conj(P)(T - zI) deviates from symmetry by " + std::to_string(asym) +
                                           " (||T|| = " + std::to_string(r.scale) + ")");
  r.a = (0.5 * (r.a + r.a.transpose())).eval();
  return r;
}

AntilinearSpectrum solve_reduced(const CMatrix& a) {
  const Index n = a.rows();
  const RealDoubling doubling = real_doubling(a);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(doubling.s);
  if (solver.info() != Eigen::Success) throw Error(Errc::no_convergence, "doubled eigenproblem did not converge");
  const RVector& e = solver.eigenvalues();
  const RMatrix& w = solver.eigenvectors();

  const double sigma_max = std::max(std::abs(e(0)), std::abs(e(2 * n - 1)));
  const double tol = kClusterRelTol * std::max(sigma_max, kNormFloor);

  AntilinearSpectrum out;
  out.lambdas.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) out.lambdas[k] = std::max(e(n + k), 0.0);

  // Kernel: u and iu both appear among the 2m middle vectors of S; extract m
  // complex-orthonormal ones.
  Index zeros = 0;
  while (zeros < n && out.lambdas[zeros] < tol) ++zeros;
  if (zeros > 0) {
    Index accepted = 0;
    for (Index c = n - zeros; c < n + zeros && accepted < zeros; ++c) {
      CVector u = as_complex(w, c, n);
      for (int pass = 0; pass < 2; ++pass)
        for (Index j = 0; j < accepted; ++j) u -= out.vectors.col(j).dot(u) * out.vectors.col(j);
      const double norm = u.norm();
      if (norm < 1e-6) continue;
      u /= norm;
      fix_phase(u, true);
      out.vectors.col(accepted++) = u;
      out.lambdas[accepted - 1] = 0.0;
    }
    if (accepted != zeros) throw Error(Errc::no_convergence, "could not span the kernel of the antilinear problem");
  }

  for (Index k = zeros; k < n; ++k) {
    CVector u = as_complex(w, n + k, n);
    // inside a degenerate cluster, Gram-Schmidt with real coefficients keeps
    // A u = lambda conj(u) intact
    Index first = k;
    while (first > zeros && out.lambdas[k] - out.lambdas[first - 1] < tol) --first;
    if (first < k) {
      for (int pass = 0; pass < 2; ++pass)
        for (Index j = first; j < k; ++j) u -= out.vectors.col(j).dot(u).real() * out.vectors.col(j);
    }
    u.normalize();
    fix_phase(u, false);
    out.vectors.col(k) = u;
  }

  for (Index k = zeros; k + 1 < n;) {
    Index end = k + 1;
    while (end < n && out.lambdas[end] - out.lambdas[end - 1] < tol) ++end;
    if (end - k > 1) ++out.degenerate_clusters;
    k = end;
  }
  if (zeros > 1) ++out.degenerate_clusters;
  return out;
}

}  // namespace

ComplexSymmetricMatrix::ComplexSymmetricMatrix(const CMatrix& m) {
  require_square(m, "ComplexSymmetricMatrix");
  if (!m.allFinite()) throw Error(Errc::invalid_argument, "ComplexSymmetricMatrix: non-finite entries");
  m_ = 0.5 * (m + m.transpose());
}

Conjugation Conjugation::entrywise(Index n) {
  Conjugation c;
  c.n_ = n;
  c.entrywise_ = true;
  return c;
}

Conjugation::Conjugation(CMatrix p) : n_(p.rows()), entrywise_(false), p_(std::move(p)) {
  require_square(p_, "Conjugation");
  if (max_asymmetry(p_) > kConjugationTol) throw Error(Errc::invalid_argument, "Conjugation: P is not symmetric");
  const CMatrix defect = p_ * p_.adjoint() - CMatrix::Identity(n_, n_);
  if (defect.cwiseAbs().maxCoeff() > kConjugationTol)
    throw Error(Errc::invalid_argument, "Conjugation: P is not unitary");
}

CMatrix Conjugation::p() const { return entrywise_ ? CMatrix(CMatrix::Identity(n_, n_)) : p_; }

CVector Conjugation::apply(const CVector& x) const {
  if (x.size() != n_) throw Error(Errc::invalid_argument, "Conjugation::apply: size mismatch");
  return entrywise_ ? CVector(x.conjugate()) : CVector(p_ * x.conjugate());
}

RealDoubling real_doubling(const CMatrix& a) {
  require_square(a, "real_doubling");
  const Index n = a.rows();
  const RMatrix b = a.real();
  const RMatrix c = a.imag();
  RealDoubling out;
  out.s.resize(2 * n, 2 * n);
  out.s.topLeftCorner(n, n) = b;
  out.s.topRightCorner(n, n) = -c;
  out.s.bottomLeftCorner(n, n) = -c;
  out.s.bottomRightCorner(n, n) = -b;
  return out;
}

RealDoubling real_doubling(const ComplexSymmetricMatrix& a) { return real_doubling(a.matrix()); }

AntilinearSpectrum antilinear_spectrum(const CMatrix& t, const Conjugation& conj, cplx z) {
  return solve_reduced(reduce(t, conj, z).a);
}

AntilinearSpectrum antilinear_spectrum(const ComplexSymmetricMatrix& a, const Conjugation& conj, cplx z) {
  return antilinear_spectrum(a.matrix(), conj, z);
}

TakagiFactorization takagi(const ComplexSymmetricMatrix& a) {
  const AntilinearSpectrum spec = solve_reduced(a.matrix());
  const Index n = a.dim();
  TakagiFactorization out;
  out.u.resize(n, n);
  out.sigma.resize(n);
  for (Index k = 0; k < n; ++k) {
    out.sigma[k] = spec.lambdas[n - 1 - k];
    out.u.col(k) = spec.vectors.col(n - 1 - k).conjugate();
  }
  out.degenerate_clusters = spec.degenerate_clusters;
  return out;
}

double resolvent_norm(const CMatrix& t, const Conjugation& conj, cplx z) {
  const Reduced r = reduce(t, conj, z);
  const AntilinearSpectrum spec = solve_reduced(r.a);
  const double lambda_min = spec.lambdas.front();
  if (lambda_min < kSingularRelTol * r.scale)
    throw Error(Errc::singular_shift, "min antilinear eigenvalue " + std::to_string(lambda_min) +
                                          " is numerically zero; z lies in the spectrum");
  return 1.0 / lambda_min;
}

double resolvent_norm(const ComplexSymmetricMatrix& a, const Conjugation& conj, cplx z) {
  return resolvent_norm(a.matrix(), conj, z);
}

CSymmetricPair block_embed(const CMatrix& m) {
  require_square(m, "block_embed");
  const Index n = m.rows();
  CMatrix op = CMatrix::Zero(2 * n, 2 * n);
  op.topLeftCorner(n, n) = m;
  op.bottomRightCorner(n, n) = m.transpose();
  CMatrix p = CMatrix::Zero(2 * n, 2 * n);
  p.topRightCorner(n, n).setIdentity();
  p.bottomLeftCorner(n, n).setIdentity();
  return {std::move(op), Conjugation(std::move(p))};
}

double minmax_norm(const ComplexSymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(real_doubling(a).s, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

MinmaxCheck minmax_even_lower_check(const ComplexSymmetricMatrix& a, int n, int trials, std::uint64_t seed) {
  const Index dim = a.dim();
  if (n < 0 || 2 * static_cast<Index>(n) >= dim)
    throw Error(Errc::index_out_of_range,
                "minmax index 2n = " + std::to_string(2 * n) + " must be below dimension " + std::to_string(dim));
  if (trials < 1) throw Error(Errc::invalid_argument, "minmax_even_lower_check: trials must be >= 1");

  const AntilinearSpectrum spec = solve_reduced(a.matrix());
  MinmaxCheck out;
  out.lambda_2n = spec.lambdas[dim - 1 - 2 * n];
  const double norm = std::max(spec.lambdas.back(), kNormFloor);
  out.worst_margin = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < trials; ++t) {
    CMatrix basis;
    if (n == 0) {
      basis = CMatrix::Identity(dim, dim);
    } else {
      CMatrix functionals_h(dim, n);  // columns = conjugated functionals
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < dim; ++i) functionals_h(i, j) = cplx(gauss(rng), gauss(rng));
      Eigen::HouseholderQR<CMatrix> qr(functionals_h);
      const CMatrix q = qr.householderQ();
      basis = q.rightCols(dim - n);
    }
    const CMatrix compressed = basis.transpose() * a.matrix() * basis;
    const double top = minmax_norm(ComplexSymmetricMatrix(compressed));
    const double margin = top - out.lambda_2n;
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -1e-9 * norm) out.passed = false;
  }
  return out;
}

}  // namespace csop
