#pragma once

#include <span>
#include <vector>

#include "csop/schrodinger.hpp"

/// Closed-form decay estimates for a gapped operator: F(q, E), the critical
/// rate q_c(E) solving q = F(q, E), the prefactor C_{q,E}, the best
/// gap-only rate G / (4 sqrt(E_minus)) and checks of |G_E(x1, x2)| against
/// C e^{-q |x1 - x2|}.
///
/// Energies are measured from the bottom of the potential, so E_minus must
/// be positive; the formulas are not shift invariant.
namespace csop {

struct BoundInputs {
  GapSpectrum gap;
  double e = 0.0;
  double q = 0.0;
  double eps = 0.5;
  int d = 1;
};

struct BoundResult {
  double f_value = 0.0;
  double c_value = 0.0;
  double q_c = 0.0;
  bool valid = false;  // q < q_c and E + q^2 below E_plus
};

/// sqrt((E_plus - E - q^2)(E - E_minus + q^2) / (4 E_minus)); 0 once
/// E + q^2 reaches E_plus.
double decay_f(const GapSpectrum& gap, double q, double e);

struct CriticalQ {
  double q_c = 0.0;
  double residual = 0.0;  // q_c - F(q_c, E)
  int iterations = 0;
};

/// Positive root of q = F(q, E) by bisection on (0, sqrt(E_plus - E)).
/// Errc::invalid_gap unless E_minus > 0 and E_minus < E < E_plus.
CriticalQ solve_critical_q(const GapSpectrum& gap, double e);
double critical_q(const GapSpectrum& gap, double e);

/// Volume of the d-ball of radius eps.
double ball_volume(int d, double eps);

/// Never throws for q outside [0, q_c): returns valid = false, C = inf.
BoundResult evaluate_bound(const BoundInputs& in);
/// As evaluate_bound, but Errc::shift_leaves_gap if E + q^2 >= E_plus and
/// Errc::q_beyond_critical if q >= q_c.
BoundResult bound_constant(const BoundInputs& in);

struct GapOnlyBound {
  double q_bar = 0.0;  // G / (4 sqrt(E_minus))
  double e_bar = 0.0;  // (E_plus + E_minus) / 2 - G^2 / (16 E_minus)
  bool e_bar_in_gap = false;
};

GapOnlyBound qbar_and_ebar(const GapSpectrum& gap);

struct Certificate {
  bool passed = true;
  double worst_margin = 0.0;    // min log(C e^{-q s}) - log|G|; +inf when empty
  std::vector<double> margins;  // per sample
  double c_value = 0.0;
};

Certificate certify_bound(std::span<const KernelSample> samples, const BoundInputs& in);

}  // namespace csop
