#pragma once

#include <vector>

#include "csop/types.hpp"

/// Kernels for tridiagonal operators: the finite-difference Hamiltonians in
/// this project are all tridiagonal, so dense O(n^3) work is avoided here.
namespace csop::tridiag {

struct SymmetricEigensystem {
  RVector values;   // ascending
  RMatrix vectors;  // orthonormal columns
};

/// diag has n entries, off has n-1 (the sub/super-diagonal).
SymmetricEigensystem symmetric_eigensystem(const RVector& diag, const RVector& off);
RVector symmetric_eigenvalues(const RVector& diag, const RVector& off);

/// Eigenvalues of a complex symmetric (T = T^T, not Hermitian) tridiagonal
/// matrix by implicit QL with complex orthogonal rotations. Falls back to a
/// dense solver if the rotations break down. Unordered.
CVector complex_symmetric_eigenvalues(const CVector& diag, const CVector& off);

/// Singular values (ascending) of a complex symmetric tridiagonal matrix,
/// read off the positive half of its banded real doubling.
RVector complex_symmetric_singular_values(const CVector& diag, const CVector& off);

/// LU with partial pivoting of a general complex tridiagonal matrix.
class ComplexLU {
 public:
  ComplexLU(const CVector& lower, const CVector& diag, const CVector& upper);

  Index size() const { return static_cast<Index>(d_.size()); }
  bool singular() const { return singular_; }
  CVector solve(const CVector& rhs, bool conjugate_transpose = false) const;
  CMatrix solve(const CMatrix& rhs, bool conjugate_transpose = false) const;

 private:
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  bool singular_ = false;
};

}  // namespace csop::tridiag
