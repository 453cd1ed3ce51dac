#include "csop/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "csop/antilinear.hpp"
#include "csop/error.hpp"

namespace csop {

namespace {

std::string fmt(double v) { return std::to_string(v); }

double spectrum_distance(const RVector& values, double e) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < values.size(); ++i) best = std::min(best, std::abs(values(i) - e));
  return best;
}

double spectrum_distance(const RVector& values, cplx e) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < values.size(); ++i) best = std::min(best, std::abs(values(i) - e));
  return best;
}

void require_shift_in_gap(const GapSpectrum& gap, double shift) {
  if (!gap.in_gap(shift))
    throw Error(Errc::shift_leaves_gap, "E + q^2 = " + fmt(shift) + " is outside the gap (" + fmt(gap.e_minus) +
                                            ", " + fmt(gap.e_plus) + ")");
}

// first-derivative central difference applied to every column
RMatrix central_difference(const RMatrix& v, double h) {
  const Index n = v.rows();
  RMatrix out(n, v.cols());
  const double s = 0.5 / h;
  for (Index c = 0; c < v.cols(); ++c) {
    for (Index i = 0; i < n; ++i) {
      const double up = i + 1 < n ? v(i + 1, c) : 0.0;
      const double down = i > 0 ? v(i - 1, c) : 0.0;
      out(i, c) = s * (up - down);
    }
  }
  return out;
}

}  // namespace

Grid1D Grid1D::make(double length, Index points) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(Errc::invalid_argument, "grid length must be positive, got " + fmt(length));
  if (points < 3) throw Error(Errc::invalid_argument, "grid needs at least 3 interior points");
  return Grid1D{length, points};
}

PotentialSpec PotentialSpec::sampled(std::vector<double> values) {
  PotentialSpec p;
  p.kind_ = Kind::sampled;
  p.values_ = std::move(values);
  return p;
}

PotentialSpec PotentialSpec::delta_comb(std::vector<double> positions, double strength) {
  if (!(strength > 0.0)) throw Error(Errc::invalid_argument, "delta comb strength must be > 0, got " + fmt(strength));
  PotentialSpec p;
  p.kind_ = Kind::delta_comb;
  p.positions_ = std::move(positions);
  p.strength_ = strength;
  return p;
}

PotentialSpec PotentialSpec::unit_comb(Index cells, double strength) {
  if (cells < 1) throw Error(Errc::invalid_argument, "comb needs at least one cell");
  std::vector<double> pos;
  for (Index k = 1; k < cells; ++k) pos.push_back(static_cast<double>(k));
  return delta_comb(std::move(pos), strength);
}

PotentialSpec resample_potential(const Grid1D& grid, std::span<const double> xs, std::span<const double> vs) {
  if (xs.size() != vs.size() || xs.size() < 2)
    throw Error(Errc::invalid_argument, "potential table needs at least two (x, v) rows of equal length");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw Error(Errc::invalid_argument, "potential table x values must increase");
  std::vector<double> out(static_cast<std::size_t>(grid.points));
  for (Index i = 0; i < grid.points; ++i) {
    const double x = grid.x(i);
    if (x <= xs.front()) {
      out[i] = vs.front();
    } else if (x >= xs.back()) {
      out[i] = vs.back();
    } else {
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xs.begin());
      const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
      out[i] = (1.0 - t) * vs[k - 1] + t * vs[k];
    }
  }
  return PotentialSpec::sampled(std::move(out));
}

RMatrix DiscreteHamiltonian::dense() const {
  const Index n = diag.size();
  RMatrix m = RMatrix::Zero(n, n);
  m.diagonal() = diag;
  m.diagonal(1) = off;
  m.diagonal(-1) = off;
  return m;
}

double DiscreteHamiltonian::norm_bound() const {
  const double o = off.size() > 0 ? off.cwiseAbs().maxCoeff() : 0.0;
  return diag.cwiseAbs().maxCoeff() + 2.0 * o;
}

DiscreteHamiltonian build_hamiltonian(const Grid1D& grid, const PotentialSpec& pot) {
  const Grid1D g = Grid1D::make(grid.length, grid.points);
  const Index n = g.points;
  const double h = g.spacing();
  const double kinetic = 1.0 / (h * h);
  DiscreteHamiltonian out;
  out.grid = g;
  out.diag = RVector::Constant(n, 2.0 * kinetic);
  out.off = RVector::Constant(n - 1, -kinetic);

  if (pot.kind() == PotentialSpec::Kind::sampled) {
    const auto& v = pot.values();
    if (static_cast<Index>(v.size()) != n)
      throw Error(Errc::invalid_argument, "sampled potential has " + std::to_string(v.size()) + " values for " +
                                              std::to_string(n) + " grid points");
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(v[i])) throw Error(Errc::invalid_argument, "sampled potential is not finite");
      if (v[i] < 0.0)
        throw Error(Errc::negative_potential,
                    "v(x) = " + fmt(v[i]) + " < 0 at x = " + fmt(g.x(i)) + " (shift the potential up)");
      out.diag(i) += v[i];
    }
    return out;
  }

  const double weight = pot.strength() / h;
  for (double p : pot.positions()) {
    if (!(p > 0.0 && p < g.length))
      throw Error(Errc::invalid_argument, "delta position " + fmt(p) + " outside (0, " + fmt(g.length) + ")");
    double t = p / h - 1.0;  // fractional grid index
    if (std::abs(t - std::round(t)) < 1e-9) t = std::round(t);
    const Index i0 = static_cast<Index>(std::floor(t));
    const double f = t - static_cast<double>(i0);
    if (i0 >= 0 && i0 < n) out.diag(i0) += (1.0 - f) * weight;
    if (f > 0.0 && i0 + 1 >= 0 && i0 + 1 < n) out.diag(i0 + 1) += f * weight;
  }
  return out;
}

Eigensystem eigensystem(const DiscreteHamiltonian& h) { return tridiag::symmetric_eigensystem(h.diag, h.off); }

GapSpectrum GapSpectrum::make(double e_bottom, double e_minus, double e_plus) {
  if (!(e_bottom <= e_minus && e_minus < e_plus) || !std::isfinite(e_plus))
    throw Error(Errc::invalid_gap, "band edges must satisfy E_bottom <= E_minus < E_plus, got " + fmt(e_bottom) +
                                       ", " + fmt(e_minus) + ", " + fmt(e_plus));
  return GapSpectrum{e_bottom, e_minus, e_plus};
}

GapSpectrum find_gap(const Eigensystem& eig, const FindGapOptions& opts) {
  const Index n = eig.values.size();
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(n));
  // on short grids every state has a large share near the walls
  const bool filter = eig.vectors.rows() == n && 8.0 * opts.edge_points <= opts.edge_fraction * n;
  for (Index k = 0; k < n; ++k) {
    if (filter) {
      const auto v = eig.vectors.col(k);
      const double edge = v.head(opts.edge_points).squaredNorm() + v.tail(opts.edge_points).squaredNorm();
      if (edge > opts.edge_fraction * v.squaredNorm()) continue;
    }
    ev.push_back(eig.values(k));
  }
  const Index m = static_cast<Index>(ev.size());
  if (m < 2) throw Error(Errc::no_gap_found, "fewer than two bulk eigenvalues");

  std::vector<double> spacing(static_cast<std::size_t>(m - 1));
  for (Index i = 0; i + 1 < m; ++i) spacing[i] = ev[i + 1] - ev[i];

  auto ratio = [&](Index i) {
    double sum = 0.0;
    int count = 0;
    for (Index j = i - opts.mean_window; j <= i + opts.mean_window; ++j) {
      if (j == i || j < 0 || j >= m - 1) continue;
      sum += spacing[j];
      ++count;
    }
    if (count == 0) return std::numeric_limits<double>::infinity();
    const double mean = sum / count;
    return mean > 0.0 ? spacing[i] / mean : std::numeric_limits<double>::infinity();
  };
  auto qualifies = [&](Index i) { return spacing[i] > opts.min_spacing && ratio(i) > opts.ratio_threshold; };

  Index pick = -1;
  if (opts.lower_band_count) {
    const Index i = *opts.lower_band_count - 1;
    if (i < 0 || i + 1 >= m)
      throw Error(Errc::no_gap_found, "lower band hint " + std::to_string(*opts.lower_band_count) + " out of range");
    if (!(spacing[i] > opts.min_spacing && ratio(i) > 1.0))
      throw Error(Errc::no_gap_found, "spacing above state " + std::to_string(i + 1) + " is " + fmt(spacing[i]) +
                                          ", not a gap (ratio " + fmt(ratio(i)) + ")");
    pick = i;
  } else {
    for (Index i = 0; i + 1 < m; ++i) {
      if (ev[i + 1] > opts.ceiling) break;
      if (qualifies(i) && (pick < 0 || spacing[i] > spacing[pick])) pick = i;
    }
    if (pick < 0) throw Error(Errc::no_gap_found, "no eigenvalue spacing passes the gap threshold");
  }
  return GapSpectrum::make(ev.front(), ev[pick], ev[pick + 1]);
}

GapSpectrum find_gap(const DiscreteHamiltonian& h, const FindGapOptions& opts) {
  return find_gap(eigensystem(h), opts);
}

RMatrix BoostedHamiltonian::dense() const {
  const Index n = diag.size();
  RMatrix m = RMatrix::Zero(n, n);
  m.diagonal() = diag;
  m.diagonal(1) = upper;
  m.diagonal(-1) = lower;
  return m;
}

BoostedHamiltonian boost(const DiscreteHamiltonian& h, double q) {
  BoostedHamiltonian out;
  out.grid = h.grid;
  out.q = q;
  const double step = q / h.grid.spacing();
  out.diag = h.diag.array() - q * q;
  out.upper = h.off.array() + step;
  out.lower = h.off.array() - step;
  return out;
}

CVector boosted_eigenvalues(const BoostedHamiltonian& hq) {
  const Index n = hq.diag.size();
  const RVector prod = hq.upper.cwiseProduct(hq.lower);
  if ((prod.array() > 0.0).all()) {
    const RVector off = -prod.cwiseSqrt();
    return tridiag::symmetric_eigenvalues(hq.diag, off).cast<cplx>();
  }
  Eigen::EigenSolver<RMatrix> solver(hq.dense(), false);
  if (solver.info() != Eigen::Success) throw Error(Errc::no_convergence, "boosted eigenvalues did not converge");
  CVector ev = solver.eigenvalues();
  std::sort(ev.data(), ev.data() + n, [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return ev;
}

double gamma_norm(const DiscreteHamiltonian& h, const GapSpectrum& gap, double q, double e, double gap_threshold) {
  require_shift_in_gap(gap, e + q * q);
  const RVector values = tridiag::symmetric_eigenvalues(h.diag, h.off);
  if (spectrum_distance(values, e) < gap_threshold)
    throw Error(Errc::shift_in_spectrum, "E = " + fmt(e) + " is within " + fmt(gap_threshold) + " of an eigenvalue");
  RMatrix m = boost(h, q).dense();
  m.diagonal().array() -= e;
  const CSymmetricPair pair = block_embed(m.cast<cplx>());
  return resolvent_norm(pair.op, pair.conj, 0.0);
}

double bq_norm(const DiscreteHamiltonian& h, const Eigensystem& eig, const GapSpectrum& gap, double q, double e,
               std::optional<double> frozen_shift, double gap_threshold) {
  const double s = frozen_shift.value_or(e + q * q);
  require_shift_in_gap(gap, s);
  if (q == 0.0) return 0.0;
  const Index n = eig.values.size();
  std::vector<Index> below, above;
  for (Index k = 0; k < n; ++k) {
    const double d = eig.values(k) - s;
    if (std::abs(d) < gap_threshold)
      throw Error(Errc::shift_in_spectrum, "shift " + fmt(s) + " is within " + fmt(gap_threshold) +
                                               " of eigenvalue " + fmt(eig.values(k)));
    (d < 0.0 ? below : above).push_back(k);
  }
  if (below.empty() || above.empty()) return 0.0;

  RMatrix vm(n, static_cast<Index>(below.size()));
  RMatrix vp(n, static_cast<Index>(above.size()));
  for (std::size_t j = 0; j < below.size(); ++j) vm.col(j) = eig.vectors.col(below[j]) / std::sqrt(s - eig.values(below[j]));
  for (std::size_t j = 0; j < above.size(); ++j) vp.col(j) = eig.vectors.col(above[j]) / std::sqrt(eig.values(above[j]) - s);
  const RMatrix b = q * (vp.transpose() * central_difference(vm, h.grid.spacing()));
  const RMatrix gram = b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

Ball ball_indices(const Grid1D& grid, double x, double eps) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "ball radius must be > 0, got " + fmt(eps));
  if (!(x - eps > 0.0 && x + eps < grid.length))
    throw Error(Errc::ball_outside_domain, "ball [" + fmt(x - eps) + ", " + fmt(x + eps) + "] not inside (0, " +
                                               fmt(grid.length) + ")");
  const double h = grid.spacing();
  const double slack = 1e-12 * h;
  const Index lo = std::max<Index>(0, static_cast<Index>(std::floor((x - eps) / h)) - 2);
  const Index hi = std::min<Index>(grid.points - 1, static_cast<Index>(std::ceil((x + eps) / h)) + 1);
  Ball b;
  b.first = -1;
  for (Index i = lo; i <= hi; ++i) {
    if (std::abs(grid.x(i) - x) <= eps + slack) {
      if (b.first < 0) b.first = i;
      b.last = i;
    }
  }
  if (b.first < 0)
    throw Error(Errc::invalid_argument, "ball of radius " + fmt(eps) + " at " + fmt(x) + " contains no grid point");
  return b;
}

AveragedResolvent::AveragedResolvent(const DiscreteHamiltonian& h, cplx e, double gap_threshold)
    : grid_(h.grid),
      e_(e),
      lu_(h.off.cast<cplx>(), (h.diag.cast<cplx>().array() - e).matrix(), h.off.cast<cplx>()) {
  const RVector values = tridiag::symmetric_eigenvalues(h.diag, h.off);
  if (spectrum_distance(values, e) <= gap_threshold || lu_.singular())
    throw Error(Errc::shift_in_spectrum, "E is within " + fmt(gap_threshold) + " of the spectrum");
}

CVector AveragedResolvent::column(double x2, double eps) const {
  const Ball b = ball_indices(grid_, x2, eps);
  CVector rhs = CVector::Zero(grid_.points);
  rhs.segment(b.first, b.size()).setOnes();
  return lu_.solve(rhs);
}

cplx AveragedResolvent::average(const CVector& column, double x1, double eps) const {
  const Ball b = ball_indices(grid_, x1, eps);
  const double omega = 2.0 * eps;
  return grid_.spacing() * column.segment(b.first, b.size()).sum() / (omega * omega);
}

cplx AveragedResolvent::operator()(double x1, double x2, double eps) const { return average(column(x2, eps), x1, eps); }

cplx avg_resolvent_kernel(const DiscreteHamiltonian& h, cplx e, double x1, double x2, double eps) {
  return AveragedResolvent(h, e)(x1, x2, eps);
}

std::vector<KernelSample> resolvent_kernel_samples(const AveragedResolvent& g, std::span<const double> anchors,
                                                   double eps, Execution exec) {
  const Index m = static_cast<Index>(anchors.size());
  std::vector<CVector> columns(anchors.size());
  for_each_index(m, exec, [&](std::ptrdiff_t j) { columns[j] = g.column(anchors[j], eps); });
  std::vector<KernelSample> out;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double value = std::abs(g.average(columns[j], anchors[i], eps));
      out.push_back({anchors[i], anchors[j], std::abs(anchors[j] - anchors[i]), value});
    }
  }
  return out;
}

ProjectorDecay projector_decay(const DiscreteHamiltonian& h, const Eigensystem& eig, const ProjectorDecayOptions& opts) {
  const double len = h.grid.length;
  if (!(opts.window_lo >= 0.0 && opts.window_lo < opts.window_hi && opts.window_hi <= 1.0))
    throw Error(Errc::invalid_argument, "fit window must satisfy 0 <= lo < hi <= 1");
  ProjectorDecay out;
  out.gap = find_gap(eig, opts.gap);

  const Index n = eig.values.size();
  const double cut = out.gap.e_minus + 1e-12 * std::max(std::abs(out.gap.e_minus), 1.0);
  while (out.filled_states < n && eig.values(out.filled_states) <= cut) ++out.filled_states;
  const auto filled = eig.vectors.leftCols(out.filled_states);

  const double eps = opts.eps;
  const double x1 = opts.anchor.value_or(std::floor(opts.window_lo * len) + 0.5);
  std::vector<double> seps = opts.separations;
  if (seps.empty())
    for (double s = std::ceil(opts.window_lo * len); s <= std::floor(opts.window_hi * len); s += 1.0) seps.push_back(s);

  const double margin = 4.0 * eps;
  auto inside = [&](double x) { return x - eps >= margin && x + eps <= len - margin; };
  if (!inside(x1)) throw Error(Errc::ball_outside_domain, "anchor " + fmt(x1) + " too close to the boundary");

  const double omega = 2.0 * eps;
  const double hq = h.grid.spacing();
  const Ball b1 = ball_indices(h.grid, x1, eps);
  const RVector c1 = filled.middleRows(b1.first, b1.size()).colwise().sum().transpose();
  for (double s : seps) {
    const double x2 = x1 + s;
    if (!inside(x2)) continue;
    const Ball b2 = ball_indices(h.grid, x2, eps);
    const RVector c2 = filled.middleRows(b2.first, b2.size()).colwise().sum().transpose();
    out.samples.push_back({x1, x2, s, hq * c1.dot(c2) / (omega * omega)});
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& k : out.samples) {
    if (k.separation < opts.window_lo * len || k.separation > opts.window_hi * len || k.value == 0.0) continue;
    const double y = std::log(std::abs(k.value)) + opts.prefactor_exponent * std::log(k.separation);
    sx += k.separation;
    sy += y;
    sxx += k.separation * k.separation;
    sxy += k.separation * y;
    ++count;
  }
  if (count < 2) throw Error(Errc::invalid_argument, "fewer than two samples inside the fit window");
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  out.q_fit = -slope;
  out.intercept = (sy - slope * sx) / count;
  return out;
}

ProjectorDecay projector_decay(const DiscreteHamiltonian& h, const ProjectorDecayOptions& opts) {
  return projector_decay(h, eigensystem(h), opts);
}

}  // namespace csop
