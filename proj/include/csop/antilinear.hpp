#pragma once

#include <cstdint>
#include <vector>

#include "csop/types.hpp"

/// Antilinear eigenvalue problems (T - z) u = lambda C u for complex symmetric
/// (C-symmetric) matrices, the Takagi factorization A = U diag(sigma) U^T,
/// resolvent norms from the smallest antilinear eigenvalue, and the bilinear
/// min-max principle for the evenly indexed singular values.
///
/// Every problem is reduced to one real symmetric eigenproblem of twice the
/// size (RealDoubling); its positive half carries the antilinear eigenpairs.
namespace csop {

/// Dense complex matrix with A == A^T exactly. Construction symmetrizes
/// (A + A^T) / 2 and rejects non-square or non-finite input.
class ComplexSymmetricMatrix {
 public:
  explicit ComplexSymmetricMatrix(const CMatrix& m);

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Conjugation C x = P conj(x) with P symmetric and unitary (so C^2 = I and
/// <Cf, Cg> = <g, f>). The default is entrywise conjugation.
class Conjugation {
 public:
  static Conjugation entrywise(Index n);
  /// Validates P == P^T and P P^H == I within 1e-12 entrywise.
  explicit Conjugation(CMatrix p);

  Index dim() const { return n_; }
  bool is_entrywise() const { return entrywise_; }
  CMatrix p() const;
  CVector apply(const CVector& x) const;

 private:
  Conjugation() = default;
  Index n_ = 0;
  bool entrywise_ = true;
  CMatrix p_;
};

/// S = [[B, -C], [-C, -B]] for A = B + iC. For symmetric A,
/// A (x + iy) = lambda conj(x + iy)  <=>  S (x, y) = lambda (x, y),
/// and spec(S) = {+sigma_k(A), -sigma_k(A)}.
struct RealDoubling {
  RMatrix s;
};

RealDoubling real_doubling(const CMatrix& a);
RealDoubling real_doubling(const ComplexSymmetricMatrix& a);

struct AntilinearSpectrum {
  std::vector<double> lambdas;  // ascending, nonnegative
  CMatrix vectors;              // column k solves (T - z) u = lambdas[k] C u, orthonormal
  int degenerate_clusters = 0;  // clusters with gap < 1e-10 ||A|| that were re-orthogonalized
};

/// Solves (T - z) u = lambda C u. T need not be symmetric; conj(P) (T - z I)
/// must be, within 1e-10 ||T|| (Errc::not_c_symmetric otherwise).
AntilinearSpectrum antilinear_spectrum(const CMatrix& t, const Conjugation& conj, cplx z = 0.0);
AntilinearSpectrum antilinear_spectrum(const ComplexSymmetricMatrix& a, const Conjugation& conj, cplx z = 0.0);

struct TakagiFactorization {
  CMatrix u;                  // unitary
  std::vector<double> sigma;  // descending
  int degenerate_clusters = 0;
};

/// A = U diag(sigma) U^T. Column k of U is the conjugate of the k-th
/// antilinear eigenvector of A (A u = sigma conj(u)).
TakagiFactorization takagi(const ComplexSymmetricMatrix& a);

/// ||(T - z)^{-1}|| = 1 / min lambda. Errc::singular_shift if
/// min lambda < 1e-13 ||T||.
double resolvent_norm(const CMatrix& t, const Conjugation& conj, cplx z);
double resolvent_norm(const ComplexSymmetricMatrix& a, const Conjugation& conj, cplx z);

/// diag(M, M^T) with the swap conjugation [[0, C], [C, 0]]; C-selfadjoint for
/// any square M, and its antilinear spectrum is sigma(M), each doubled.
struct CSymmetricPair {
  CMatrix op;
  Conjugation conj;
};

CSymmetricPair block_embed(const CMatrix& m);

/// max over unit u of Re(u^T A u), which equals ||A||.
double minmax_norm(const ComplexSymmetricMatrix& a);

struct MinmaxCheck {
  bool passed = true;
  double worst_margin = 0.0;  // min over trials of (max_V Re[Au,u]) - lambda_{2n}
  double lambda_2n = 0.0;     // singular values sorted descending, index 2n
};

/// Samples `trials` random codimension-n subspaces V and checks
/// max_{u in V, |u|=1} Re[Au, u] >= lambda_{2n} - 1e-9 ||A||.
/// Errc::index_out_of_range if 2n >= dim.
MinmaxCheck minmax_even_lower_check(const ComplexSymmetricMatrix& a, int n, int trials, std::uint64_t seed = 7);

}  // namespace csop
