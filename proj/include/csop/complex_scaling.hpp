#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csop/parallel.hpp"
#include "csop/schrodinger.hpp"
#include "csop/types.hpp"

/// Complex scaling on the half line: H_theta(gamma) = -e^{-2 theta} d^2/dx^2
/// + v(e^theta x) + gamma w(e^theta x), Dirichlet at 0 and L. The matrix is
/// complex symmetric, so its resolvent norm is 1 / (smallest antilinear
/// eigenvalue) for the entrywise conjugation.
namespace csop::cs {

class DilationPotential {
 public:
  using Function = std::function<cplx(cplx)>;

  /// alpha x^2 e^{-x}; analytic under dilation for |Im theta| < pi/2.
  static DilationPotential alpha_x2_exp(double alpha);
  static DilationPotential zero();
  /// f must be real on the positive axis and analytic in the sector
  /// |arg x| < strip.
  static DilationPotential analytic(std::string name, Function f, double strip);

  cplx operator()(cplx x) const { return f_(x); }
  double strip() const { return strip_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Function f_;
  double strip_ = 0.0;
};

struct ScalingProblem {
  DilationPotential v;
  std::optional<DilationPotential> w;  // perturbation; v itself when absent
  Grid1D grid;
};

struct ScaledHamiltonian {
  Grid1D grid;
  cplx theta;
  double gamma = 0.0;
  cplx kinetic;     // e^{-2 theta}
  CVector diag;
  CVector off;      // shared by both off-diagonals
  CVector v_values; // v(e^theta x_i)
  CVector w_values; // w(e^theta x_i)
  double tail = 0.0;  // |v(e^theta L)|

  CMatrix dense() const;
  CVector apply(const CVector& x) const;
};

/// Errc::strip_violation if |Im theta| reaches the analyticity strip.
ScaledHamiltonian build_scaled(const ScalingProblem& p, cplx theta, double gamma = 0.0);

/// Sorted by real part, then imaginary part.
CVector scaled_eigenvalues(const ScaledHamiltonian& h);

enum class Label { bound, resonance, continuum, unlabeled };
std::string_view label_name(Label l);

struct ClassifyOptions {
  double discrete_factor = 0.1;    // stationary if |dz| < factor |z| |dtheta|
  double continuum_factor = 0.3;   // rotated if |dz - rotation| < factor |z (e^{-2 dtheta} - 1)|
  /// Stationary z is a bound state if Re z <= 0 or |Im z| <= resonance_im
  /// max(1, |z|), a resonance if Im z is below -resonance_im max(1, |z|).
  double resonance_im = 1e-6;
};

struct SpectrumClassification {
  CVector eigenvalues;
  std::vector<Label> labels;
  std::vector<double> displacement;  // distance to the nearest eigenvalue at theta + dtheta
  cplx delta_theta;

  Index count(Label l) const;
};

/// Errc::pairing_ambiguity if two stationary eigenvalues match the same
/// eigenvalue of h2.
SpectrumClassification classify_spectrum(const ScaledHamiltonian& h1, const ScaledHamiltonian& h2,
                                         const ClassifyOptions& opts = {});

/// Distance from z to the rotated continuum ray arg = -2 Im theta.
/// raw is |z sin(2 Im theta - alpha)|, z = |z| e^{-i alpha}; clamped
/// replaces it by |z| when the nearest point of the line is behind the origin.
struct RayDistance {
  double clamped = 0.0;
  double raw = 0.0;
};
RayDistance ray_distance(cplx z, cplx theta);

struct ResolventAt {
  double norm = 0.0;
  double lambda_min = 0.0;
  CVector psi;            // (H - z) psi = lambda_min conj(psi)
  double residual = 0.0;  // ||(H - z) psi - lambda_min conj(psi)||
};

/// Dense antilinear route; O(n^3) in 2n, meant for n up to a few hundred.
ResolventAt resolvent_norm_at(const ScaledHamiltonian& h, cplx z);
/// Same quantity from the banded real doubling; O(n^2).
double resolvent_norm_banded(const ScaledHamiltonian& h, cplx z);

struct ResonanceOptions {
  cplx delta_theta{0.0, 0.02};
  double re_lo = 0.0;
  double re_hi = 6.0;
  double im_lo = -0.5;
  double im_hi = 0.0;
  double tol = 1e-10;
  int max_iter = 60;
  ClassifyOptions classify;
};

struct Resonance {
  cplx z;
  CVector psi;            // normalized, psi^T psi real positive
  double residual = 0.0;  // ||(H - z) psi||
  int iterations = 0;
  int candidates = 0;     // resonance labels inside the window
  double displacement = 0.0;
};

/// Bilinear Rayleigh-quotient iteration from z0 (and start vector, if given).
Resonance polish_resonance(const ScaledHamiltonian& h, cplx z0, const CVector* start = nullptr, double tol = 1e-10,
                           int max_iter = 60);

/// Classifies at theta and theta + dtheta, picks the most stationary
/// resonance in the window, polishes it. Errc::no_convergence if none.
Resonance locate_resonance(const ScalingProblem& p, cplx theta, double gamma = 0.0, const ResonanceOptions& opts = {});

/// Second-order Richardson step from two spacings.
cplx richardson(cplx coarse, double h_coarse, cplx fine, double h_fine, int order = 2);

struct ExtrapolatedResonance {
  cplx coarse;
  cplx fine;
  cplx extrapolated;
  Index n_coarse = 0;
  Index n_fine = 0;
};

ExtrapolatedResonance extrapolated_resonance(const DilationPotential& v, double length, Index n_coarse, Index n_fine,
                                             cplx theta, const ResonanceOptions& opts = {});

struct FloorReport {
  double floor = 0.0;      // clamped ray distance
  double raw_floor = 0.0;
  double tol = 0.0;
  Index count_below = 0;   // singular values below floor - tol
  Index count_band = 0;    // singular values in [floor - tol, 2 floor]
  RVector lowest;          // smallest few singular values
};

FloorReport essential_floor_check(const ScaledHamiltonian& h, cplx z, double tol_fraction = 0.1, Index keep = 8);

/// ||f psi|| <= a ||K psi|| + b ||psi|| for f in {v_theta, w_theta},
/// K = -e^{-2 theta} d^2/dx^2.
struct RelativeBound {
  double a = 0.0;
  double b = 0.0;
  Index samples = 0;
  std::uint64_t seed = 0;
};

/// Least squares over random vectors, wave packets and `extra`, then b
/// raised until every sample satisfies the inequality.
RelativeBound fit_relative_bound(const ScaledHamiltonian& h, std::span<const CVector> extra = {}, int random = 32,
                                 std::uint64_t seed = 7);

/// a / (1 - a) + (b + a |z|) / (1 - a) * resolvent_norm
double bound_estimate(const RelativeBound& c, cplx z, double resolvent_norm);

/// ||w_theta (H - z)^{-1}|| by power iteration with tridiagonal solves.
double w_resolvent_norm(const ScaledHamiltonian& h, cplx z, int max_iter = 300, double rel_tol = 1e-10);

struct ScanRow {
  double gamma = 0.0;
  cplx z_res;
  double norm = 0.0;          // ||(H_theta(gamma) - z_probe)^{-1}||
  double bound = 0.0;         // estimate of ||w_theta (H_theta - z_probe)^{-1}||
  double measured_wr = 0.0;   // the same quantity, measured
  double psi0_residual = 0.0; // ||(H_theta(gamma) - z_probe) psi0||
  double psi0_bound = 0.0;    // |z0 - z_probe| (1 + gamma * bound)
};

struct ScanOptions {
  ResonanceOptions resonance;
  std::optional<RelativeBound> constants;
  int fit_samples = 32;
  std::uint64_t seed = 7;
};

struct PerturbationScan {
  Resonance unperturbed;
  RelativeBound constants;
  std::vector<ScanRow> rows;
};

PerturbationScan perturbation_scan(const ScalingProblem& p, cplx theta, std::span<const double> gammas,
                                   cplx z_probe, const ScanOptions& opts = {},
                                   Execution exec = Execution::parallel);

}  // namespace csop::cs
