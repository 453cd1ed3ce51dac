#include "csop/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "csop/error.hpp"

namespace csop::tridiag {

namespace {

void check_sizes(Index n, Index off) {
  if (n < 1 || off != n - 1)
    throw Error(Errc::invalid_argument, "tridiagonal: diag has " + std::to_string(n) +
                                            " entries, off-diagonal " + std::to_string(off));
}

void check_info(lapack_int info, const char* routine) {
  if (info < 0) throw Error(Errc::invalid_argument, std::string(routine) + ": bad argument");
  if (info > 0) throw Error(Errc::no_convergence, std::string(routine) + " failed, info=" + std::to_string(info));
}

// r or -r, whichever makes |g + r| larger
cplx aligned(cplx r, cplx g) { return (std::real(std::conj(g) * r) >= 0.0) ? r : -r; }

bool complex_ql(CVector& d, CVector e_in) {
  const Index n = d.size();
  CVector e(n);
  e.head(n - 1) = e_in;
  e(n - 1) = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (Index l = 0; l < n; ++l) {
    int iter = 0;
    Index m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 80) return false;
        cplx g = (d(l + 1) - d(l)) / (2.0 * e(l));
        cplx r = std::sqrt(g * g + 1.0);
        g = d(m) - d(l) + e(l) / (g + aligned(r, g));
        cplx s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (Index i = m - 1; i >= l; --i) {
          const cplx f = s * e(i);
          const cplx b = c * e(i);
          r = std::sqrt(f * f + g * g);
          e(i + 1) = r;
          if (std::abs(r) == 0.0) {
            if (std::abs(f) + std::abs(g) != 0.0) return false;  // isotropic breakdown
            d(i + 1) -= p;
            e(m) = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }
  for (Index i = 0; i < n; ++i)
    if (!std::isfinite(d(i).real()) || !std::isfinite(d(i).imag())) return false;
  return true;
}

}  // namespace

SymmetricEigensystem symmetric_eigensystem(const RVector& diag, const RVector& off) {
  const Index n = diag.size();
  check_sizes(n, off.size());
  // dstemr (MRRR); the divide-and-conquer dstevd returns wrong vectors for
  // n > ~400 with some LAPACK builds
  RVector d = diag;
  RVector e = RVector::Zero(n);
  e.head(n - 1) = off;
  SymmetricEigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', static_cast<lapack_int>(n), d.data(), e.data(), 0.0, 0.0, 0,
                            0, &found, out.values.data(), out.vectors.data(), static_cast<lapack_int>(n),
                            static_cast<lapack_int>(n), support.data(), &tryrac),
             "dstemr");
  if (found != n) throw Error(Errc::no_convergence, "dstemr found " + std::to_string(found) + " of " +
                                                        std::to_string(n) + " eigenpairs");
  return out;
}

RVector symmetric_eigenvalues(const RVector& diag, const RVector& off) {
  const Index n = diag.size();
  check_sizes(n, off.size());
  RVector d = diag;
  RVector e = RVector::Zero(n);
  e.head(n - 1) = off;
  check_info(LAPACKE_dsterf(static_cast<lapack_int>(n), d.data(), e.data()), "dsterf");
  return d;
}

CVector complex_symmetric_eigenvalues(const CVector& diag, const CVector& off) {
  const Index n = diag.size();
  check_sizes(n, off.size());
  CVector d = diag;
  if (n == 1 || complex_ql(d, off)) return d;
  CMatrix dense = CMatrix::Zero(n, n);
  dense.diagonal() = diag;
  dense.diagonal(1) = off;
  dense.diagonal(-1) = off;
  Eigen::ComplexEigenSolver<CMatrix> solver(dense, false);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::no_convergence, "complex symmetric tridiagonal eigenvalues did not converge");
  return solver.eigenvalues();
}

RVector complex_symmetric_singular_values(const CVector& diag, const CVector& off) {
  const Index n = diag.size();
  check_sizes(n, off.size());
  const Index big = 2 * n;
  constexpr Index kd = 3;
  constexpr Index ldab = kd + 1;
  RVector ab = RVector::Zero(ldab * big);
  auto put = [&](Index r, Index c, double v) { ab(kd + r - c + c * ldab) = v; };  // r <= c
  for (Index i = 0; i < n; ++i) {
    const cplx a = diag(i);
    put(2 * i, 2 * i, a.real());
    put(2 * i + 1, 2 * i + 1, -a.real());
    put(2 * i, 2 * i + 1, -a.imag());
    if (i + 1 < n) {
      const cplx b = off(i);
      put(2 * i, 2 * i + 2, b.real());
      put(2 * i, 2 * i + 3, -b.imag());
      put(2 * i + 1, 2 * i + 2, -b.imag());
      put(2 * i + 1, 2 * i + 3, -b.real());
    }
  }
  RVector w(big);
  check_info(LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', static_cast<lapack_int>(big), static_cast<lapack_int>(kd),
                           ab.data(), static_cast<lapack_int>(ldab), w.data(), nullptr, 1),
             "dsbev");
  RVector sv = w.tail(n);
  for (Index i = 0; i < n; ++i) sv(i) = std::max(sv(i), 0.0);
  return sv;
}

ComplexLU::ComplexLU(const CVector& lower, const CVector& diag, const CVector& upper) {
  const Index n = diag.size();
  check_sizes(n, lower.size());
  check_sizes(n, upper.size());
  dl_.assign(lower.data(), lower.data() + lower.size());
  d_.assign(diag.data(), diag.data() + n);
  du_.assign(upper.data(), upper.data() + upper.size());
  if (n == 1) {
    dl_.resize(1);
    du_.resize(1);
  }
  du2_.assign(std::max<Index>(n - 2, 1), cplx{});
  ipiv_.assign(n, 0);
  const lapack_int info = LAPACKE_zgttrf(static_cast<lapack_int>(n), dl_.data(), d_.data(), du_.data(),
                                         du2_.data(), ipiv_.data());
  if (info < 0) throw Error(Errc::invalid_argument, "zgttrf: bad argument");
  singular_ = info > 0;
}

CMatrix ComplexLU::solve(const CMatrix& rhs, bool conjugate_transpose) const {
  if (singular_) throw Error(Errc::singular_shift, "tridiagonal matrix is exactly singular");
  if (rhs.rows() != size()) throw Error(Errc::invalid_argument, "ComplexLU::solve: size mismatch");
  CMatrix x = rhs;
  const lapack_int info = LAPACKE_zgttrs(
      LAPACK_COL_MAJOR, conjugate_transpose ? 'C' : 'N', static_cast<lapack_int>(size()),
      static_cast<lapack_int>(x.cols()), dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(), x.data(),
      static_cast<lapack_int>(size()));
  check_info(info, "zgttrs");
  return x;
}

CVector ComplexLU::solve(const CVector& rhs, bool conjugate_transpose) const {
  CMatrix m = rhs;
  return solve(m, conjugate_transpose).col(0);
}

}  // namespace csop::tridiag
