#include "csop/decay_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csop/bisect.hpp"
#include "csop/error.hpp"

namespace csop {

namespace {

void require_valid(const GapSpectrum& gap, double e) {
  if (!(gap.e_minus > 0.0))
    throw Error(Errc::invalid_gap, "E_minus must be > 0, got " + std::to_string(gap.e_minus));
  if (!(gap.e_minus < gap.e_plus)) throw Error(Errc::invalid_gap, "E_minus must lie below E_plus");
  if (!gap.in_gap(e))
    throw Error(Errc::invalid_gap, "E = " + std::to_string(e) + " outside the gap (" + std::to_string(gap.e_minus) +
                                       ", " + std::to_string(gap.e_plus) + ")");
}

}  // namespace

double decay_f(const GapSpectrum& gap, double q, double e) {
  const double upper = gap.e_plus - e - q * q;
  const double lower = e - gap.e_minus + q * q;
  if (upper <= 0.0 || lower <= 0.0) return 0.0;
  return std::sqrt(upper * lower / (4.0 * gap.e_minus));
}

CriticalQ solve_critical_q(const GapSpectrum& gap, double e) {
  require_valid(gap, e);
  const auto g = [&](double q) { return q - decay_f(gap, q, e); };
  const BisectResult r = bisect(g, 0.0, std::sqrt(gap.e_plus - e), 1e-13);
  return {r.root, r.root - decay_f(gap, r.root, e), r.iterations};
}

double critical_q(const GapSpectrum& gap, double e) { return solve_critical_q(gap, e).q_c; }

double ball_volume(int d, double eps) {
  if (d < 1) throw Error(Errc::invalid_argument, "dimension must be >= 1");
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "averaging radius must be > 0");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0) * std::pow(eps, d);
}

BoundResult evaluate_bound(const BoundInputs& in) {
  require_valid(in.gap, in.e);
  if (!(in.q >= 0.0))
    throw Error(Errc::precondition_violated, "q must satisfy q >= 0, got " + std::to_string(in.q));
  const double omega = ball_volume(in.d, in.eps);
  BoundResult out;
  out.q_c = critical_q(in.gap, in.e);
  out.f_value = decay_f(in.gap, in.q, in.e);
  const double shifted = in.e + in.q * in.q;
  out.valid = in.q < out.q_c && shifted < in.gap.e_plus;
  if (!out.valid) {
    out.c_value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double dist = std::min(in.gap.e_plus - shifted, shifted - in.gap.e_minus);
  out.c_value = std::exp(2.0 * in.q * in.eps) / (omega * dist * (1.0 - in.q / out.f_value));
  return out;
}

BoundResult bound_constant(const BoundInputs& in) {
  const BoundResult r = evaluate_bound(in);
  if (in.e + in.q * in.q >= in.gap.e_plus)
    throw Error(Errc::shift_leaves_gap, "E + q^2 = " + std::to_string(in.e + in.q * in.q) + " >= E_plus");
  if (!r.valid)
    throw Error(Errc::q_beyond_critical,
                "q = " + std::to_string(in.q) + " is not below q_c = " + std::to_string(r.q_c));
  return r;
}

GapOnlyBound qbar_and_ebar(const GapSpectrum& gap) {
  if (!(gap.e_minus > 0.0))
    throw Error(Errc::invalid_gap, "E_minus must be > 0, got " + std::to_string(gap.e_minus));
  if (!(gap.e_minus < gap.e_plus)) throw Error(Errc::invalid_gap, "E_minus must lie below E_plus");
  const double g = gap.gap();
  GapOnlyBound out;
  out.q_bar = g / (4.0 * std::sqrt(gap.e_minus));
  out.e_bar = 0.5 * (gap.e_plus + gap.e_minus) - g * g / (16.0 * gap.e_minus);
  out.e_bar_in_gap = gap.in_gap(out.e_bar);
  return out;
}

Certificate certify_bound(std::span<const KernelSample> samples, const BoundInputs& in) {
  Certificate out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  if (samples.empty()) return out;
  out.c_value = bound_constant(in).c_value;
  const double log_c = std::log(out.c_value);
  for (const auto& s : samples) {
    const double mag = std::abs(s.value);
    const double margin = mag == 0.0 ? std::numeric_limits<double>::infinity()
                                     : log_c - in.q * s.separation - std::log(mag);
    out.margins.push_back(margin);
    out.worst_margin = std::min(out.worst_margin, margin);
    if (!(margin >= 0.0)) out.passed = false;
  }
  return out;
}

}  // namespace csop
