#include "csop/complex_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "csop/antilinear.hpp"
#include "csop/error.hpp"
#include "csop/tridiagonal.hpp"

namespace csop::cs {

namespace {

constexpr double kPi = std::numbers::pi;

Index nearest(const CVector& values, cplx target) {
  Index best = 0;
  double dist = std::abs(values(0) - target);
  for (Index j = 1; j < values.size(); ++j) {
    const double d = std::abs(values(j) - target);
    if (d < dist) {
      dist = d;
      best = j;
    }
  }
  return best;
}

tridiag::ComplexLU shifted_lu(const ScaledHamiltonian& h, cplx z) {
  return tridiag::ComplexLU(h.off, (h.diag.array() - z).matrix(), h.off);
}

CVector kinetic_apply(const ScaledHamiltonian& h, const CVector& x) {
  const Index n = x.size();
  const double inv_h2 = 1.0 / (h.grid.spacing() * h.grid.spacing());
  CVector y(n);
  for (Index i = 0; i < n; ++i) {
    cplx s = 2.0 * x(i);
    if (i > 0) s -= x(i - 1);
    if (i + 1 < n) s -= x(i + 1);
    y(i) = h.kinetic * inv_h2 * s;
  }
  return y;
}

struct PowerResult {
  double norm = 0.0;
  CVector image;  // (H - z)^{-1} v for the top right singular vector v
};

PowerResult w_resolvent_power(const ScaledHamiltonian& h, cplx z, int max_iter, double rel_tol) {
  const tridiag::ComplexLU lu = shifted_lu(h, z);
  if (lu.singular()) throw Error(Errc::singular_shift, "H - z is singular");
  const Index n = h.diag.size();
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(1.0 + 0.3 * std::sin(0.7 * i), 0.2 * std::cos(1.3 * i));
  v.normalize();
  double sigma = 0.0;
  CVector image;
  for (int it = 0; it < max_iter; ++it) {
    image = lu.solve(v);
    CVector y = h.w_values.cwiseProduct(image);
    y = h.w_values.conjugate().cwiseProduct(y);
    y = lu.solve(y, true);
    const double norm2 = y.norm();
    if (norm2 == 0.0) break;
    const double next = std::sqrt(norm2);
    v = y / norm2;
    const bool done = std::abs(next - sigma) <= rel_tol * next;
    sigma = next;
    if (done) break;
  }
  image = lu.solve(v);
  return {sigma, image / image.norm()};
}

}  // namespace

DilationPotential DilationPotential::alpha_x2_exp(double alpha) {
  if (!std::isfinite(alpha)) throw Error(Errc::invalid_argument, "alpha must be finite");
  return analytic("alpha_x2_exp", [alpha](cplx x) { return alpha * x * x * std::exp(-x); }, 0.5 * kPi);
}

DilationPotential DilationPotential::zero() {
  return analytic("zero", [](cplx) { return cplx(0.0); }, std::numeric_limits<double>::infinity());
}

DilationPotential DilationPotential::analytic(std::string name, Function f, double strip) {
  if (!f) throw Error(Errc::invalid_argument, "dilation potential needs a callable");
  if (!(strip > 0.0)) throw Error(Errc::invalid_argument, "analyticity strip must be > 0");
  DilationPotential p;
  p.name_ = std::move(name);
  p.f_ = std::move(f);
  p.strip_ = strip;
  return p;
}

CMatrix ScaledHamiltonian::dense() const {
  const Index n = diag.size();
  CMatrix m = CMatrix::Zero(n, n);
  m.diagonal() = diag;
  m.diagonal(1) = off;
  m.diagonal(-1) = off;
  return m;
}

CVector ScaledHamiltonian::apply(const CVector& x) const {
  const Index n = diag.size();
  CVector y = diag.cwiseProduct(x);
  y.head(n - 1) += off.cwiseProduct(x.tail(n - 1));
  y.tail(n - 1) += off.cwiseProduct(x.head(n - 1));
  return y;
}

ScaledHamiltonian build_scaled(const ScalingProblem& p, cplx theta, double gamma) {
  const Grid1D g = Grid1D::make(p.grid.length, p.grid.points);
  const DilationPotential& w = p.w ? *p.w : p.v;
  const double strip = std::min(p.v.strip(), w.strip());
  if (!(std::abs(theta.imag()) < strip))
    throw Error(Errc::strip_violation, "|Im theta| = " + std::to_string(std::abs(theta.imag())) +
                                           " not below the analyticity strip " + std::to_string(strip));
  if (!std::isfinite(gamma)) throw Error(Errc::invalid_argument, "gamma must be finite");
  const Index n = g.points;
  const double h = g.spacing();
  const cplx scale = std::exp(theta);
  ScaledHamiltonian out;
  out.grid = g;
  out.theta = theta;
  out.gamma = gamma;
  out.kinetic = std::exp(-2.0 * theta);
  const cplx hop = out.kinetic / (h * h);
  out.v_values.resize(n);
  out.w_values.resize(n);
  out.diag.resize(n);
  for (Index i = 0; i < n; ++i) {
    const cplx x = scale * g.x(i);
    out.v_values(i) = p.v(x);
    out.w_values(i) = w(x);
    out.diag(i) = 2.0 * hop + out.v_values(i);
    if (gamma != 0.0) out.diag(i) += gamma * out.w_values(i);
  }
  out.off = CVector::Constant(n - 1, -hop);
  out.tail = std::abs(p.v(scale * g.length));
  if (!out.diag.allFinite()) throw Error(Errc::invalid_argument, "scaled potential is not finite on the grid");
  return out;
}

CVector scaled_eigenvalues(const ScaledHamiltonian& h) {
  CVector ev = tridiag::complex_symmetric_eigenvalues(h.diag, h.off);
  std::sort(ev.data(), ev.data() + ev.size(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return ev;
}

std::string_view label_name(Label l) {
  switch (l) {
    case Label::bound: return "bound";
    case Label::resonance: return "resonance";
    case Label::continuum: return "continuum";
    case Label::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Index SpectrumClassification::count(Label l) const {
  return static_cast<Index>(std::count(labels.begin(), labels.end(), l));
}

SpectrumClassification classify_spectrum(const ScaledHamiltonian& h1, const ScaledHamiltonian& h2,
                                         const ClassifyOptions& opts) {
  if (h1.grid.points != h2.grid.points || h1.grid.length != h2.grid.length)
    throw Error(Errc::invalid_argument, "classify_spectrum needs both operators on the same grid");
  const cplx dtheta = h2.theta - h1.theta;
  if (std::abs(dtheta) == 0.0) throw Error(Errc::invalid_argument, "classify_spectrum needs theta2 != theta1");
  SpectrumClassification out;
  out.delta_theta = dtheta;
  out.eigenvalues = scaled_eigenvalues(h1);
  const CVector z2 = scaled_eigenvalues(h2);
  const cplx rotation = std::exp(-2.0 * dtheta);
  const Index n = out.eigenvalues.size();
  out.labels.assign(static_cast<std::size_t>(n), Label::unlabeled);
  out.displacement.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<Index> partner(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < n; ++k) {
    const cplx z = out.eigenvalues(k);
    const Index j = nearest(z2, z);
    const double moved = std::abs(z2(j) - z);
    out.displacement[k] = moved;
    const cplx rotated = z * rotation;
    const double off_rotation = std::abs(z2(nearest(z2, rotated)) - rotated);
    if (moved < opts.discrete_factor * std::abs(z) * std::abs(dtheta)) {
      partner[k] = j;
      // below the continuum threshold a stationary eigenvalue can only be a
      // bound state; its imaginary part is discretization error
      const double im_tol = opts.resonance_im * std::max(1.0, std::abs(z));
      if (z.real() <= 0.0 || std::abs(z.imag()) <= im_tol)
        out.labels[k] = Label::bound;
      else if (z.imag() < -im_tol)
        out.labels[k] = Label::resonance;
    } else if (off_rotation < opts.continuum_factor * std::abs(z - rotated)) {
      out.labels[k] = Label::continuum;
    }
  }
  std::vector<Index> owner(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < n; ++k) {
    if (partner[k] < 0) continue;
    if (owner[partner[k]] >= 0)
      throw Error(Errc::pairing_ambiguity, "stationary eigenvalues " + std::to_string(owner[partner[k]]) + " and " +
                                               std::to_string(k) + " share a partner");
    owner[partner[k]] = k;
  }
  return out;
}

RayDistance ray_distance(cplx z, cplx theta) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  double alpha = -std::arg(z);
  if (alpha <= -kPi) alpha = kPi;
  const double delta = 2.0 * theta.imag() - alpha;
  RayDistance out;
  out.raw = std::abs(r * std::sin(delta));
  const double wrapped = std::remainder(delta, 2.0 * kPi);
  out.clamped = std::abs(wrapped) <= 0.5 * kPi ? out.raw : r;
  return out;
}

ResolventAt resolvent_norm_at(const ScaledHamiltonian& h, cplx z) {
  const CMatrix m = h.dense();
  const Index n = m.rows();
  const AntilinearSpectrum spec = antilinear_spectrum(m, Conjugation::entrywise(n), z);
  ResolventAt out;
  out.lambda_min = spec.lambdas.front();
  const double scale = std::max(h.diag.cwiseAbs().maxCoeff() + 2.0 * std::abs(h.off(0)), kNormFloor);
  if (out.lambda_min < 1e-13 * scale)
    throw Error(Errc::singular_shift, "z is numerically an eigenvalue (min lambda " + std::to_string(out.lambda_min) + ")");
  out.norm = 1.0 / out.lambda_min;
  out.psi = spec.vectors.col(0);
  out.residual = (h.apply(out.psi) - z * out.psi - out.lambda_min * out.psi.conjugate()).norm();
  return out;
}

double resolvent_norm_banded(const ScaledHamiltonian& h, cplx z) {
  const RVector sv = tridiag::complex_symmetric_singular_values((h.diag.array() - z).matrix(), h.off);
  const double scale = std::max(sv(sv.size() - 1), kNormFloor);
  if (sv(0) < 1e-13 * scale) throw Error(Errc::singular_shift, "z is numerically an eigenvalue");
  return 1.0 / sv(0);
}

Resonance polish_resonance(const ScaledHamiltonian& h, cplx z0, const CVector* start, double tol, int max_iter) {
  const Index n = h.diag.size();
  CVector x(n);
  if (start && start->size() == n) {
    x = *start;
  } else {
    for (Index i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.5 * std::sin(0.37 * i), 0.25 * std::cos(0.91 * i));
  }
  x.normalize();
  Resonance out;
  cplx z = z0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const tridiag::ComplexLU lu = shifted_lu(h, z);
    out.iterations = it + 1;
    if (lu.singular()) {
      converged = true;
      break;
    }
    CVector y = lu.solve(x);
    x = y / y.norm();
    const cplx next = x.transpose() * h.apply(x);
    const cplx denom = x.transpose() * x;
    const cplx ray = next / denom;
    const double step = std::abs(ray - z);
    z = ray;
    // the first pass is plain inverse iteration at z0
    if (it > 0 && step <= tol * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(Errc::no_convergence, "Rayleigh-quotient iteration did not converge");
  const cplx root = std::sqrt(cplx(x.transpose() * x));
  if (std::abs(root) > 0.0) x *= std::conj(root) / std::abs(root);
  out.z = z;
  out.psi = x;
  out.residual = (h.apply(x) - z * x).norm();
  return out;
}

Resonance locate_resonance(const ScalingProblem& p, cplx theta, double gamma, const ResonanceOptions& opts) {
  const ScaledHamiltonian h1 = build_scaled(p, theta, gamma);
  const ScaledHamiltonian h2 = build_scaled(p, theta + opts.delta_theta, gamma);
  const SpectrumClassification cls = classify_spectrum(h1, h2, opts.classify);
  Index pick = -1;
  int candidates = 0;
  for (Index k = 0; k < cls.eigenvalues.size(); ++k) {
    const cplx z = cls.eigenvalues(k);
    if (cls.labels[k] != Label::resonance) continue;
    if (!(z.real() > opts.re_lo && z.real() < opts.re_hi && z.imag() > opts.im_lo && z.imag() < opts.im_hi)) continue;
    ++candidates;
    if (pick < 0 || cls.displacement[k] < cls.displacement[pick]) pick = k;
  }
  if (pick < 0) throw Error(Errc::no_convergence, "no stationary resonance inside the search window");
  Resonance out = polish_resonance(h1, cls.eigenvalues(pick), nullptr, opts.tol, opts.max_iter);
  out.candidates = candidates;
  out.displacement = cls.displacement[pick];
  return out;
}

cplx richardson(cplx coarse, double h_coarse, cplx fine, double h_fine, int order) {
  if (!(h_coarse > h_fine && h_fine > 0.0)) throw Error(Errc::invalid_argument, "richardson needs h_coarse > h_fine > 0");
  const double ratio = std::pow(h_coarse / h_fine, order);
  return fine + (fine - coarse) / (ratio - 1.0);
}

ExtrapolatedResonance extrapolated_resonance(const DilationPotential& v, double length, Index n_coarse, Index n_fine,
                                             cplx theta, const ResonanceOptions& opts) {
  const Grid1D gc = Grid1D::make(length, n_coarse);
  const Grid1D gf = Grid1D::make(length, n_fine);
  ExtrapolatedResonance out;
  out.n_coarse = n_coarse;
  out.n_fine = n_fine;
  out.coarse = locate_resonance(ScalingProblem{v, std::nullopt, gc}, theta, 0.0, opts).z;
  out.fine = locate_resonance(ScalingProblem{v, std::nullopt, gf}, theta, 0.0, opts).z;
  out.extrapolated = richardson(out.coarse, gc.spacing(), out.fine, gf.spacing());
  return out;
}

FloorReport essential_floor_check(const ScaledHamiltonian& h, cplx z, double tol_fraction, Index keep) {
  const RVector sv = tridiag::complex_symmetric_singular_values((h.diag.array() - z).matrix(), h.off);
  const RayDistance d = ray_distance(z, h.theta);
  FloorReport out;
  out.floor = d.clamped;
  out.raw_floor = d.raw;
  out.tol = tol_fraction * d.clamped;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < out.floor - out.tol)
      ++out.count_below;
    else if (sv(i) <= 2.0 * out.floor)
      ++out.count_band;
  }
  out.lowest = sv.head(std::min(keep, sv.size()));
  return out;
}

RelativeBound fit_relative_bound(const ScaledHamiltonian& h, std::span<const CVector> extra, int random,
                                 std::uint64_t seed) {
  const Index n = h.diag.size();
  std::vector<CVector> samples;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < random; ++s) {
    CVector x(n);
    for (Index i = 0; i < n; ++i) x(i) = cplx(gauss(rng), gauss(rng));
    samples.push_back(x);
  }
  const double len = h.grid.length;
  for (double c : {len / 16, len / 8, len / 4, len / 2}) {
    for (double width : {0.5, 1.0, 2.0, 4.0}) {
      for (double k : {0.0, 1.0, 2.0, 4.0}) {
        CVector x(n);
        for (Index i = 0; i < n; ++i) {
          const double t = (h.grid.x(i) - c) / width;
          x(i) = std::exp(-0.5 * t * t) * std::polar(1.0, k * h.grid.x(i));
        }
        samples.push_back(x);
      }
    }
  }
  for (const auto& x : extra)
    if (x.size() == n) samples.push_back(x);

  std::vector<double> ks, ys;
  for (auto& x : samples) {
    const double norm = x.norm();
    if (norm == 0.0) continue;
    x /= norm;
    ks.push_back(kinetic_apply(h, x).norm());
    ys.push_back(std::max(h.v_values.cwiseProduct(x).norm(), h.w_values.cwiseProduct(x).norm()));
  }
  const double m = static_cast<double>(ks.size());
  double sk = 0, sy = 0, skk = 0, sky = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sk += ks[i];
    sy += ys[i];
    skk += ks[i] * ks[i];
    sky += ks[i] * ys[i];
  }
  const double den = m * skk - sk * sk;
  double a = den > 0.0 ? (m * sky - sk * sy) / den : 0.0;
  a = std::clamp(a, 0.0, 0.5);
  double b = std::max((sy - a * sk) / m, 0.0);
  for (std::size_t i = 0; i < ks.size(); ++i) b = std::max(b, ys[i] - a * ks[i]);
  return {a, b, static_cast<Index>(ks.size()), seed};
}

double bound_estimate(const RelativeBound& c, cplx z, double resolvent_norm) {
  if (!(c.a >= 0.0 && c.a < 1.0)) throw Error(Errc::precondition_violated, "relative bound a must lie in [0, 1)");
  return c.a / (1.0 - c.a) + (c.b + c.a * std::abs(z)) / (1.0 - c.a) * resolvent_norm;
}

double w_resolvent_norm(const ScaledHamiltonian& h, cplx z, int max_iter, double rel_tol) {
  return w_resolvent_power(h, z, max_iter, rel_tol).norm;
}

PerturbationScan perturbation_scan(const ScalingProblem& p, cplx theta, std::span<const double> gammas, cplx z_probe,
                                   const ScanOptions& opts, Execution exec) {
  PerturbationScan out;
  const ScaledHamiltonian h0 = build_scaled(p, theta, 0.0);
  out.unperturbed = locate_resonance(p, theta, 0.0, opts.resonance);
  const double r0 = resolvent_norm_banded(h0, z_probe);
  const PowerResult wr = w_resolvent_power(h0, z_probe, 300, 1e-10);
  if (opts.constants) {
    out.constants = *opts.constants;
  } else {
    const std::vector<CVector> extra{out.unperturbed.psi, wr.image};
    out.constants = fit_relative_bound(h0, extra, opts.fit_samples, opts.seed);
  }
  const double bound = bound_estimate(out.constants, z_probe, r0);
  const cplx z0 = out.unperturbed.z;

  out.rows.resize(gammas.size());
  for_each_index(static_cast<std::ptrdiff_t>(gammas.size()), exec, [&](std::ptrdiff_t i) {
    const double g = gammas[i];
    const ScaledHamiltonian hg = build_scaled(p, theta, g);
    ScanRow row;
    row.gamma = g;
    row.z_res = polish_resonance(hg, z0, &out.unperturbed.psi, opts.resonance.tol, opts.resonance.max_iter).z;
    row.norm = resolvent_norm_banded(hg, z_probe);
    row.bound = bound;
    row.measured_wr = wr.norm;
    row.psi0_residual = (hg.apply(out.unperturbed.psi) - z_probe * out.unperturbed.psi).norm();
    row.psi0_bound = std::abs(z0 - z_probe) * (1.0 + std::abs(g) * bound);
    out.rows[i] = row;
  });
  return out;
}

}  // namespace csop::cs
