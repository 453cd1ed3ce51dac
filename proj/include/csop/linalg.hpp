#pragma once

#include "csop/types.hpp"

namespace csop {

/// Largest singular value by power iteration on A^H A. Used to scale
/// relative tolerances, so a few digits suffice.
double operator_norm_estimate(const CMatrix& a, int max_iter = 200, double rel_tol = 1e-8);

/// max_ij |A_ij - A_ji|
double max_asymmetry(const CMatrix& a);

}  // namespace csop
