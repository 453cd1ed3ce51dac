#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csop/error.hpp"
#include "csop/kronig_penney.hpp"
#include "csop/schrodinger.hpp"
#include "oracles.hpp"

using namespace csop;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no csop::Error thrown");
  return Errc::invalid_argument;
}

// small comb on a grid where every delta sits on a grid point
DiscreteHamiltonian small_comb(Index cells = 8, Index per_cell = 10, double v0 = 3.0) {
  const Grid1D g = Grid1D::make(static_cast<double>(cells), cells * per_cell - 1);
  return build_hamiltonian(g, PotentialSpec::unit_comb(cells, v0));
}

}  // namespace

TEST_SUITE("schrodinger") {

TEST_CASE("free Dirichlet chain has the closed-form spectrum") {
  const Grid1D g = Grid1D::make(2.0, 50);
  const auto h = build_hamiltonian(g, PotentialSpec::sampled(std::vector<double>(50, 0.0)));
  const auto eig = eigensystem(h);
  const double hs = g.spacing();
  for (Index k = 1; k <= 50; ++k) {
    const double s = std::sin(k * std::numbers::pi * hs / (2.0 * g.length));
    CHECK(eig.values(k - 1) == doctest::Approx(4.0 / (hs * hs) * s * s).epsilon(1e-12));
  }
}

TEST_CASE("grid geometry") {
  const Grid1D g = Grid1D::make(10.0, 9);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.x(0) == doctest::Approx(1.0));
  CHECK(g.x(8) == doctest::Approx(9.0));
  CHECK(code_of([] { Grid1D::make(-1.0, 10); }) == Errc::invalid_argument);
}

TEST_CASE("delta weight is v0/h on grid and split off grid") {
  const Grid1D on = Grid1D::make(2.0, 9);  // h = 0.2, x = 1 is index 4
  const auto h_on = build_hamiltonian(on, PotentialSpec::delta_comb({1.0}, 3.0));
  const double free = 2.0 / (0.2 * 0.2);
  CHECK(h_on.diag(4) - free == doctest::Approx(3.0 / 0.2));
  CHECK(h_on.diag(3) == doctest::Approx(free));

  const auto h_off = build_hamiltonian(on, PotentialSpec::delta_comb({1.05}, 3.0));
  const double w4 = h_off.diag(4) - free;
  const double w5 = h_off.diag(5) - free;
  CHECK((w4 + w5) * 0.2 == doctest::Approx(3.0));
  CHECK((w4 * on.x(4) + w5 * on.x(5)) / (w4 + w5) == doctest::Approx(1.05));
}

TEST_CASE("potential preconditions") {
  const Grid1D g = Grid1D::make(1.0, 4);
  CHECK(code_of([&] { build_hamiltonian(g, PotentialSpec::sampled({0.0, -1.0, 0.0, 0.0})); }) ==
        Errc::negative_potential);
  CHECK(code_of([] { PotentialSpec::delta_comb({0.5}, -1.0); }) == Errc::invalid_argument);
}

TEST_CASE("resampled potential interpolates linearly") {
  const Grid1D g = Grid1D::make(4.0, 3);  // x = 1, 2, 3
  const std::vector<double> xs{0.0, 4.0};
  const std::vector<double> vs{0.0, 8.0};
  const auto p = resample_potential(g, xs, vs);
  CHECK(p.values()[0] == doctest::Approx(2.0));
  CHECK(p.values()[2] == doctest::Approx(6.0));
}

TEST_CASE("find_gap on the comb: E_minus near pi^2, edges bracket KP") {
  const Grid1D g = Grid1D::make(40.0, 2000);
  const auto h = build_hamiltonian(g, PotentialSpec::unit_comb(40, 3.0));
  FindGapOptions opts;
  opts.lower_band_count = 40;
  const GapSpectrum gap = find_gap(h, opts);
  const auto kp = kp::band_edges(kp::Model::make(3.0));
  CHECK(gap.e_minus == doctest::Approx(kp.e_minus).epsilon(1e-3));
  CHECK(gap.e_plus == doctest::Approx(kp.e_plus).epsilon(2e-2));
  // without the hint the largest qualifying spacing below 20 is the same gap
  FindGapOptions free;
  free.ceiling = 20.0;
  const GapSpectrum g2 = find_gap(h, free);
  CHECK(g2.e_minus == doctest::Approx(gap.e_minus));
}

TEST_CASE("find_gap without a gap") {
  const Grid1D g = Grid1D::make(1.0, 30);
  const auto h = build_hamiltonian(g, PotentialSpec::sampled(std::vector<double>(30, 0.0)));
  CHECK(code_of([&] { find_gap(h); }) == Errc::no_gap_found);
}

TEST_CASE("boost: H_q equals H + 2qD - q^2 and its spectrum is a rescaled H") {
  const auto h = small_comb();
  const double q = 0.4;
  const auto hq = boost(h, q);
  const Index n = h.grid.points;
  const double hs = h.grid.spacing();
  RMatrix d = RMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    d(i, i + 1) = 0.5 / hs;
    d(i + 1, i) = -0.5 / hs;
  }
  const RMatrix expected = h.dense() + 2.0 * q * d - q * q * RMatrix::Identity(n, n);
  CHECK((hq.dense() - expected).norm() < 1e-9 * expected.norm());

  RMatrix scaled = h.dense();
  const double c = std::sqrt(1.0 - q * q * hs * hs);
  scaled.diagonal(1) *= c;
  scaled.diagonal(-1) *= c;
  Eigen::SelfAdjointEigenSolver<RMatrix> ref(scaled, Eigen::EigenvaluesOnly);
  const CVector got = boosted_eigenvalues(hq);
  for (Index k = 0; k < n; ++k) {
    CHECK(std::abs(got(k).imag()) < 1e-12);
    CHECK(got(k).real() == doctest::Approx(ref.eigenvalues()(k) - q * q).epsilon(1e-9));
  }
  // the -q^2 shift and the off-diagonal rescaling cancel at the bottom
  const auto eig = eigensystem(h);
  CHECK(std::abs(got(0).real() - eig.values(0)) < 1e-3 * eig.values(0));
}

TEST_CASE("gamma_norm equals the dense inverse norm of H_q - E") {
  const auto h = small_comb();
  FindGapOptions opts;
  opts.lower_band_count = 8;
  const GapSpectrum gap = find_gap(h, opts);
  const double e = 0.5 * (gap.e_minus + gap.e_plus);
  for (double q : {0.0, 0.2, 0.5}) {
    RMatrix m = boost(h, q).dense();
    const double ref = oracle::resolvent_norm_by_inverse(m.cast<oracle::cplx>(), e);
    CHECK(gamma_norm(h, gap, q, e) == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(code_of([&] { gamma_norm(h, gap, 3.0, e); }) == Errc::shift_leaves_gap);
}

TEST_CASE("B_q norm matches a dense construction") {
  const auto h = small_comb();
  const auto eig = eigensystem(h);
  FindGapOptions opts;
  opts.lower_band_count = 8;
  const GapSpectrum gap = find_gap(eig, opts);
  const double e = gap.e_minus + 0.3 * gap.gap();
  const double q = 0.5;
  const double s = e + q * q;
  const Index n = h.grid.points;
  const double hs = h.grid.spacing();
  RMatrix d = RMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    d(i, i + 1) = 0.5 / hs;
    d(i + 1, i) = -0.5 / hs;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> dense(h.dense());
  const RMatrix& v = dense.eigenvectors();
  RVector w(n), plus(n), minus(n);
  for (Index k = 0; k < n; ++k) {
    const double lam = dense.eigenvalues()(k);
    w(k) = 1.0 / std::sqrt(std::abs(lam - s));
    plus(k) = lam > s ? 1.0 : 0.0;
    minus(k) = lam < s ? 1.0 : 0.0;
  }
  const RMatrix root = v * w.asDiagonal() * v.transpose();
  const RMatrix pp = v * plus.asDiagonal() * v.transpose();
  const RMatrix pm = v * minus.asDiagonal() * v.transpose();
  const RMatrix b = pp * root * (q * d) * root * pm;
  Eigen::JacobiSVD<RMatrix> svd(b);
  CHECK(bq_norm(h, eig, gap, q, e) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  CHECK(bq_norm(h, eig, gap, 0.0, e) == 0.0);
}

TEST_CASE("ball indices and domain checks") {
  const Grid1D g = Grid1D::make(10.0, 99);  // h = 0.1
  const Ball b = ball_indices(g, 5.0, 0.25);
  CHECK(b.size() == 5);
  CHECK(g.x(b.first) == doctest::Approx(4.8));
  CHECK(code_of([&] { ball_indices(g, 0.1, 0.25); }) == Errc::ball_outside_domain);
}

TEST_CASE("averaged resolvent kernel matches the dense inverse") {
  const auto h = small_comb();
  FindGapOptions opts;
  opts.lower_band_count = 8;
  const GapSpectrum gap = find_gap(h, opts);
  const double e = 0.5 * (gap.e_minus + gap.e_plus);
  const double eps = 0.25;
  const AveragedResolvent g(h, e);
  RMatrix m = h.dense();
  m.diagonal().array() -= e;
  const RMatrix inv = m.inverse();
  const Ball b1 = ball_indices(h.grid, 2.5, eps);
  const Ball b2 = ball_indices(h.grid, 5.5, eps);
  const double hs = h.grid.spacing();
  const double ref = hs * inv.block(b1.first, b2.first, b1.size(), b2.size()).sum() / (4.0 * eps * eps);
  CHECK(std::abs(g(2.5, 5.5, eps) - ref) < 1e-10 * std::abs(ref));
  CHECK(std::abs(avg_resolvent_kernel(h, e, 2.5, 5.5, eps) - ref) < 1e-10 * std::abs(ref));

  const std::vector<double> anchors{1.5, 2.5, 4.5};
  const auto samples = resolvent_kernel_samples(g, anchors, eps, Execution::serial);
  CHECK(samples.size() == 3);
  std::vector<double> seps;
  for (const auto& k : samples) seps.push_back(k.separation);
  std::sort(seps.begin(), seps.end());
  CHECK(seps == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("averaged resolvent at an eigenvalue is rejected") {
  const auto h = small_comb();
  const auto eig = eigensystem(h);
  CHECK(code_of([&] { AveragedResolvent(h, eig.values(3)); }) == Errc::shift_in_spectrum);
}

TEST_CASE("filled-band projector decays at the Kronig-Penney rate") {
  const Grid1D g = Grid1D::make(40.0, 2000);
  const auto h = build_hamiltonian(g, PotentialSpec::unit_comb(40, 3.0));
  ProjectorDecayOptions opts;
  opts.gap.lower_band_count = 40;
  const ProjectorDecay pd = projector_decay(h, opts);
  CHECK(pd.filled_states == 40);
  const double exact = kp::exact_decay(kp::Model::make(3.0)).q_exact;
  CHECK(pd.q_fit == doctest::Approx(exact).epsilon(0.02));
  CHECK(pd.samples.size() == 17);
}

}
