#include "csop/kronig_penney.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "csop/bisect.hpp"
#include "csop/decay_bounds.hpp"
#include "csop/error.hpp"

namespace csop::kp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-14;

double half_trace_k(double v0, double k) { return std::cos(k) + v0 * std::sin(k) / (2.0 * k); }

// dh/dk
double half_trace_slope(double v0, double k) {
  return -std::sin(k) + v0 * (k * std::cos(k) - std::sin(k)) / (2.0 * k * k);
}

double stationary_k(double v0) {
  const double lo = kPi;
  const double hi = 2.0 * kPi;
  const auto f = [v0](double k) { return half_trace_slope(v0, k); };
  if (!(f(lo) < 0.0 && f(hi) > 0.0))
    throw Error(Errc::branch_point_not_found, "dh/dk has no sign change in the first gap for v0 = " + std::to_string(v0));
  return bisect(f, lo, hi, kTol).root;
}

}  // namespace

Model Model::make(double v0) {
  if (!(v0 > 0.0) || !std::isfinite(v0))
    throw Error(Errc::invalid_argument, "comb strength v0 must be > 0, got " + std::to_string(v0));
  return Model{v0};
}

double dispersion(const Model& m, double e) {
  if (e > 0.0) return half_trace_k(m.v0, std::sqrt(e));
  if (e == 0.0) return 1.0 + 0.5 * m.v0;
  const double kappa = std::sqrt(-e);
  return std::cosh(kappa) + m.v0 * std::sinh(kappa) / (2.0 * kappa);
}

double dispersion_derivative(const Model& m, double e) {
  if (!(e > 0.0)) throw Error(Errc::invalid_argument, "dh/dE is evaluated for E > 0 only");
  const double k = std::sqrt(e);
  return half_trace_slope(m.v0, k) / (2.0 * k);
}

BandEdges band_edges(const Model& m) {
  const double v0 = m.v0;
  BandEdges out;
  const auto bottom = bisect([v0](double k) { return half_trace_k(v0, k) - 1.0; }, 1e-12, kPi, kTol);
  const double ks = stationary_k(v0);
  const auto top = bisect([v0](double k) { return half_trace_k(v0, k) + 1.0; }, ks, 2.0 * kPi, kTol);
  out.e_bottom = bottom.root * bottom.root;
  out.e_minus = kPi * kPi;
  out.e_plus = top.root * top.root;
  out.max_residual = std::max({std::abs(dispersion(m, out.e_bottom) - 1.0),
                               std::abs(dispersion(m, out.e_minus) + 1.0),
                               std::abs(dispersion(m, out.e_plus) + 1.0)});
  return out;
}

ExactDecay exact_decay(const Model& m) {
  const double ks = stationary_k(m.v0);
  ExactDecay out;
  out.e_star = ks * ks;
  out.h_star = half_trace_k(m.v0, ks);
  if (!(std::abs(out.h_star) > 1.0))
    throw Error(Errc::branch_point_not_found, "stationary point of h is not inside the gap");
  out.q_exact = std::acosh(std::abs(out.h_star));
  return out;
}

double evanescent_rate(const Model& m, double e) {
  const double h = std::abs(dispersion(m, e));
  return h > 1.0 ? std::acosh(h) : 0.0;
}

Fig1Row fig1_row(double v0) {
  const Model m = Model::make(v0);
  const BandEdges edges = band_edges(m);
  const GapOnlyBound bound = qbar_and_ebar(edges.spectrum());
  Fig1Row row;
  row.v0 = v0;
  row.gap = edges.gap();
  row.width = edges.width();
  row.gap_over_width = edges.ratio();
  row.q_exact = exact_decay(m).q_exact;
  row.q_bound = bound.q_bar;
  row.rel_diff = (row.q_exact - row.q_bound) / row.q_exact;
  return row;
}

std::vector<Fig1Row> fig1_sweep(std::span<const double> v0s, Execution exec) {
  std::vector<Fig1Row> rows(v0s.size());
  for_each_index(static_cast<std::ptrdiff_t>(v0s.size()), exec, [&](std::ptrdiff_t i) { rows[i] = fig1_row(v0s[i]); });
  return rows;
}

double v0_for_ratio(double ratio) {
  if (!(ratio > 0.0)) throw Error(Errc::invalid_argument, "G/W target must be > 0");
  const auto f = [ratio](double log_v0) { return band_edges(Model{std::exp(log_v0)}).ratio() - ratio; };
  return std::exp(bisect(f, std::log(1e-6), std::log(1e6), 1e-13).root);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw Error(Errc::invalid_argument, "log_spaced needs 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> fig1_default_v0_values(int count, double ratio_lo, double ratio_hi) {
  return log_spaced(v0_for_ratio(ratio_lo), v0_for_ratio(ratio_hi), count);
}

}  // namespace csop::kp
