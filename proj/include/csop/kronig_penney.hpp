#pragma once

#include <span>
#include <vector>

#include "csop/parallel.hpp"
#include "csop/schrodinger.hpp"

/// Delta-comb lattice H = -d^2/dx^2 + v0 sum_n delta(x - n), lattice constant
/// 1. Bloch condition cos(kappa) = h(E) with the half-trace
/// h(E) = cos(k) + v0 sin(k) / (2k), k = sqrt(E).
namespace csop::kp {

struct Model {
  double v0 = 0.0;
  static Model make(double v0);  // v0 > 0
};

double dispersion(const Model& m, double e);
/// dh/dE; finite for E > 0.
double dispersion_derivative(const Model& m, double e);

struct BandEdges {
  double e_bottom = 0.0;  // h = 1, k in (0, pi)
  double e_minus = 0.0;   // h = -1 at k = pi exactly
  double e_plus = 0.0;    // h = -1, k in (k*, 2 pi)
  double max_residual = 0.0;

  double gap() const { return e_plus - e_minus; }
  double width() const { return e_minus - e_bottom; }
  double ratio() const { return gap() / width(); }
  GapSpectrum spectrum() const { return GapSpectrum::make(e_bottom, e_minus, e_plus); }
};

BandEdges band_edges(const Model& m);

/// Branch point of the complex band structure in the first gap: dh/dE = 0
/// at E*, and q = arccosh|h(E*)| is the decay rate of the filled-band
/// density matrix.
struct ExactDecay {
  double e_star = 0.0;
  double h_star = 0.0;
  double q_exact = 0.0;
};

ExactDecay exact_decay(const Model& m);

/// Imaginary Bloch momentum arccosh|h(E)| for E in a gap (0 inside a band).
double evanescent_rate(const Model& m, double e);

struct Fig1Row {
  double v0 = 0.0;
  double gap = 0.0;
  double width = 0.0;
  double gap_over_width = 0.0;
  double q_exact = 0.0;
  double q_bound = 0.0;
  double rel_diff = 0.0;
};

Fig1Row fig1_row(double v0);
std::vector<Fig1Row> fig1_sweep(std::span<const double> v0s, Execution exec = Execution::parallel);

/// v0 with G/W = ratio, by bisection on log v0.
double v0_for_ratio(double ratio);
/// count log-spaced v0 values between the strengths giving G/W = ratio_lo
/// and G/W = ratio_hi.
std::vector<double> fig1_default_v0_values(int count = 20, double ratio_lo = 0.1, double ratio_hi = 10.0);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace csop::kp
