#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "csop/parallel.hpp"
#include "csop/tridiagonal.hpp"
#include "csop/types.hpp"

/// Finite-difference Dirichlet Schrodinger operators on [0, L] and the
/// objects used to bound the decay of their resolvent and spectral projector:
/// the boost H_q = H + 2qD - q^2, gamma(q, E) = ||(H_q - E)^{-1}||, the
/// off-diagonal coupling B_q, and ball-averaged kernels.
namespace csop {

/// Interior grid x_i = (i + 1) h, h = L / (n + 1); psi vanishes at 0 and L.
struct Grid1D {
  double length = 0.0;
  Index points = 0;

  static Grid1D make(double length, Index points);
  double spacing() const { return length / static_cast<double>(points + 1); }
  double x(Index i) const { return static_cast<double>(i + 1) * spacing(); }
};

class PotentialSpec {
 public:
  enum class Kind { sampled, delta_comb };

  /// Values at the grid points; must be >= 0.
  static PotentialSpec sampled(std::vector<double> values);
  /// v0 * sum_k delta(x - positions[k]); v0 > 0, positions inside (0, L).
  static PotentialSpec delta_comb(std::vector<double> positions, double strength);
  /// Unit-lattice comb with deltas at 1, 2, ..., cells - 1 on [0, cells].
  static PotentialSpec unit_comb(Index cells, double strength);

  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& positions() const { return positions_; }
  double strength() const { return strength_; }

 private:
  Kind kind_ = Kind::sampled;
  std::vector<double> values_;
  std::vector<double> positions_;
  double strength_ = 0.0;
};

/// Linear interpolation of a tabulated (x, v) potential onto the grid,
/// constant extrapolation past the table ends.
PotentialSpec resample_potential(const Grid1D& grid, std::span<const double> xs, std::span<const double> vs);

/// 3-point Laplacian plus diagonal potential. Each delta contributes v0/h,
/// split linearly between the two grid points around it.
struct DiscreteHamiltonian {
  Grid1D grid;
  RVector diag;
  RVector off;  // n - 1 entries

  RMatrix dense() const;
  /// Gershgorin bound on ||H||.
  double norm_bound() const;
};

DiscreteHamiltonian build_hamiltonian(const Grid1D& grid, const PotentialSpec& pot);

using Eigensystem = tridiag::SymmetricEigensystem;
Eigensystem eigensystem(const DiscreteHamiltonian& h);

/// Two-band spectrum [E_bottom, E_minus] u [E_plus, ...).
struct GapSpectrum {
  double e_bottom = 0.0;
  double e_minus = 0.0;
  double e_plus = 0.0;

  static GapSpectrum make(double e_bottom, double e_minus, double e_plus);
  double gap() const { return e_plus - e_minus; }
  double width() const { return e_minus - e_bottom; }
  bool in_gap(double e) const { return e > e_minus && e < e_plus; }
};

struct FindGapOptions {
  /// Number of (bulk) states in the lower band; picks the gap right above it,
  /// which then only has to be wider than the neighbouring spacings.
  std::optional<Index> lower_band_count;
  /// Without a hint, only spacings whose upper end is below this are searched.
  double ceiling = std::numeric_limits<double>::infinity();
  /// A spacing is a gap if it exceeds ratio_threshold times the mean of the
  /// mean_window spacings on either side, and exceeds min_spacing.
  double ratio_threshold = 10.0;
  double min_spacing = 1e-6;
  Index mean_window = 5;
  /// States with more than edge_fraction of their weight on the edge_points
  /// sites next to either wall are treated as surface states and skipped.
  /// Off when the grid has fewer than 8 edge_points / edge_fraction points.
  Index edge_points = 5;
  double edge_fraction = 0.25;
};

GapSpectrum find_gap(const Eigensystem& eig, const FindGapOptions& opts = {});
GapSpectrum find_gap(const DiscreteHamiltonian& h, const FindGapOptions& opts = {});

/// H_q = H + 2 q D - q^2 with D the central difference (D^T = -D), so
/// H_q^T == H_{-q} entry for entry.
struct BoostedHamiltonian {
  Grid1D grid;
  double q = 0.0;
  RVector diag;
  RVector upper;  // (i, i+1)
  RVector lower;  // (i+1, i)

  RMatrix dense() const;
};

BoostedHamiltonian boost(const DiscreteHamiltonian& h, double q);

/// Eigenvalues of H_q, ascending by real part. For |q| h < 1 H_q is similar
/// to a real symmetric tridiagonal matrix and the result is real; otherwise a
/// dense nonsymmetric solve is used.
CVector boosted_eigenvalues(const BoostedHamiltonian& hq);

/// ||(H_q - E)^{-1}||, from the smallest antilinear eigenvalue of the block
/// embedding diag(H_q - E, (H_q - E)^T). Dense in 2n; meant for modest grids.
double gamma_norm(const DiscreteHamiltonian& h, const GapSpectrum& gap, double q, double e,
                  double gap_threshold = 1e-6);

/// ||B_q|| with B_q = P+ |H - s|^{-1/2} (q D) |H - s|^{-1/2} P-, s = E + q^2
/// (or `frozen_shift` when given, to hold the weights fixed while varying q).
double bq_norm(const DiscreteHamiltonian& h, const Eigensystem& eig, const GapSpectrum& gap, double q, double e,
               std::optional<double> frozen_shift = {}, double gap_threshold = 1e-6);

/// Grid indices [first, last] of the closed eps-ball around x.
struct Ball {
  Index first = 0;
  Index last = -1;
  Index size() const { return last - first + 1; }
};
Ball ball_indices(const Grid1D& grid, double x, double eps);

/// Factorizes H - E once; evaluates ball averages
/// G(x1, x2) = (2 eps)^{-2} <chi_x1, (H - E)^{-1} chi_x2>, inner product with
/// quadrature weight h.
class AveragedResolvent {
 public:
  AveragedResolvent(const DiscreteHamiltonian& h, cplx e, double gap_threshold = 1e-6);

  cplx operator()(double x1, double x2, double eps) const;
  /// (H - E)^{-1} chi_x, reusable for many x1.
  CVector column(double x2, double eps) const;
  cplx average(const CVector& column, double x1, double eps) const;

  const Grid1D& grid() const { return grid_; }
  cplx energy() const { return e_; }

 private:
  Grid1D grid_;
  cplx e_;
  tridiag::ComplexLU lu_;
};

cplx avg_resolvent_kernel(const DiscreteHamiltonian& h, cplx e, double x1, double x2, double eps);

struct KernelSample {
  double x1 = 0.0;
  double x2 = 0.0;
  double separation = 0.0;
  double value = 0.0;
};

/// |G(x1, x2)| for every pair (anchors[i], anchors[j]) with i < j, one
/// factorized solve per right-hand anchor.
std::vector<KernelSample> resolvent_kernel_samples(const AveragedResolvent& g, std::span<const double> anchors,
                                                   double eps, Execution exec = Execution::parallel);

struct ProjectorDecayOptions {
  FindGapOptions gap;
  double eps = 0.1;
  /// Defaults to every integer separation inside the fit window.
  std::vector<double> separations;
  /// Left ball centre; defaults to floor(window_lo * L) + 0.5.
  std::optional<double> anchor;
  double window_lo = 0.2;
  double window_hi = 0.6;
  /// Fits log|P(s)| + p log s = c - q s. p = 1/2 is the branch-point saddle
  /// prefactor of a 1D filled band; p = 0 is the plain log-linear fit.
  double prefactor_exponent = 0.5;
};

struct ProjectorDecay {
  GapSpectrum gap;
  Index filled_states = 0;
  double q_fit = 0.0;
  double intercept = 0.0;
  std::vector<KernelSample> samples;  // signed ball-averaged projector values
};

ProjectorDecay projector_decay(const DiscreteHamiltonian& h, const Eigensystem& eig,
                               const ProjectorDecayOptions& opts = {});
ProjectorDecay projector_decay(const DiscreteHamiltonian& h, const ProjectorDecayOptions& opts = {});

}  // namespace csop
