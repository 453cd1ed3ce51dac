#pragma once

#include <cmath>
#include <string>

#include "csop/error.hpp"

namespace csop {

struct BisectResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bisection on a sign change of f over [lo, hi]. Stops when the bracket is
/// narrower than rel_tol * max(|lo|, |hi|).
template <class F>
BisectResult bisect(F&& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0) || !std::isfinite(flo) || !std::isfinite(fhi)) {
    throw Error(Errc::bracket_failure, "no sign change on [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
  int it = 0;
  while (it < max_iter) {
    ++it;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return {mid, 0.0, it};
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  const bool take_lo = std::abs(flo) <= std::abs(fhi);
  return {take_lo ? lo : hi, take_lo ? flo : fhi, it};
}

}  // namespace csop
