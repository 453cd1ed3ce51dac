#include "csop/linalg.hpp"

#include <cmath>

namespace csop {

double operator_norm_estimate(const CMatrix& a, int max_iter, double rel_tol) {
  if (a.size() == 0) return 0.0;
  CVector v(a.cols());
  // fixed, non-symmetric start so no deterministic eigenvector is missed by symmetry
  for (Index i = 0; i < v.size(); ++i) v(i) = cplx(1.0 + 0.37 * std::sin(1.0 + i), 0.11 * std::cos(2.0 * i));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVector w = a.adjoint() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    v = w / norm;
    if (std::abs(next - sigma) <= rel_tol * next) return next;
    sigma = next;
  }
  return sigma;
}

double max_asymmetry(const CMatrix& a) {
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j + 1; i < a.rows(); ++i) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
  return worst;
}

}  // namespace csop
