#include <doctest.h>

#include <cstdlib>
#include <random>

#include "csop/error.hpp"
#include "csop/sweeps.hpp"
#include "oracles.hpp"

using namespace csop;

TEST_SUITE("sweeps") {

TEST_CASE("resolvent map: parallel equals serial, inf on an eigenvalue") {
  const auto h = cs::build_scaled(
      {cs::DilationPotential::zero(), std::nullopt, Grid1D::make(1.0, 9)}, 0.0);  // real spectrum
  const CVector ev = cs::scaled_eigenvalues(h);
  const std::vector<double> re{0.5, ev(0).real(), 300.0};
  const std::vector<double> im{0.0, 0.5};
  const auto a = resolvent_map(h, re, im, Execution::serial);
  const auto b = resolvent_map(h, re, im, Execution::parallel);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].re == b[i].re);
    CHECK(a[i].norm == b[i].norm);
  }
  CHECK(std::isinf(a[1].norm));
  CHECK(a[4].im == 0.5);
  CHECK(a[4].norm == doctest::Approx(2.0));
}

TEST_CASE("critical q curve and gamma scan") {
  const GapSpectrum gap = GapSpectrum::make(0.0, 1.0, 3.0);
  const std::vector<double> es{1.5, 2.0, 2.5};
  const auto a = critical_q_curve(gap, es, Execution::serial);
  const auto b = critical_q_curve(gap, es, Execution::parallel);
  for (std::size_t i = 0; i < es.size(); ++i) {
    CHECK(a[i].q_c == b[i].q_c);
    CHECK(a[i].q_c == doctest::Approx(oracle::critical_q(1.0, 3.0, es[i])).epsilon(1e-12));
  }

  const Grid1D g = Grid1D::make(6.0, 59);
  const auto h = build_hamiltonian(g, PotentialSpec::unit_comb(6, 3.0));
  FindGapOptions opts;
  opts.lower_band_count = 6;
  const GapSpectrum cg = find_gap(h, opts);
  const double e = 0.5 * (cg.e_minus + cg.e_plus);
  const std::vector<double> qs{0.0, 0.3};
  const auto ga = gamma_scan(h, cg, e, qs, Execution::serial);
  const auto gb = gamma_scan(h, cg, e, qs, Execution::parallel);
  CHECK(ga == gb);
  CHECK(ga[0] == doctest::Approx(1.0 / std::min(e - cg.e_minus, cg.e_plus - e)).epsilon(1e-9));
}

TEST_CASE("antilinear batch") {
  std::mt19937_64 rng(31);
  std::vector<CMatrix> ms;
  for (int i = 0; i < 5; ++i) ms.push_back(oracle::random_symmetric(6, rng));
  const auto a = antilinear_batch(ms, Execution::serial);
  const auto b = antilinear_batch(ms, Execution::parallel);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].lambdas == b[i].lambdas);
    CHECK(a[i].lambdas.front() == doctest::Approx(oracle::singular_values(ms[i])(0)).epsilon(1e-11));
  }
}

TEST_CASE("errors inside parallel loops propagate") {
  const GapSpectrum gap = GapSpectrum::make(0.0, 1.0, 3.0);
  const std::vector<double> es{1.5, 7.0};
  CHECK_THROWS_AS(critical_q_curve(gap, es, Execution::parallel), Error);
}

TEST_CASE("CSOP_THREADS") {
  setenv("CSOP_THREADS", "2", 1);
  CHECK_NOTHROW(apply_thread_limit_from_env());
  setenv("CSOP_THREADS", "two", 1);
  CHECK_THROWS_AS(apply_thread_limit_from_env(), Error);
  unsetenv("CSOP_THREADS");
  CHECK_NOTHROW(apply_thread_limit_from_env());
}

}
