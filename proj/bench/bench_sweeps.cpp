#include <vector>

#include <benchmark/benchmark.h>

#include "csop/complex_scaling.hpp"
#include "csop/kronig_penney.hpp"
#include "csop/sweeps.hpp"

namespace {

csop::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? csop::Execution::serial : csop::Execution::parallel;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

void BM_ResolventMap(benchmark::State& state) {
  const auto grid = csop::Grid1D::make(40.0, 300);
  const auto h = csop::cs::build_scaled({csop::cs::DilationPotential::alpha_x2_exp(7.5), std::nullopt, grid},
                                        csop::cplx(0.0, 0.3));
  const auto re = linspace(0.5, 6.0, 8);
  const auto im = linspace(-0.5, -0.05, 4);
  for (auto _ : state) benchmark::DoNotOptimize(csop::resolvent_map(h, re, im, mode(state)));
}
BENCHMARK(BM_ResolventMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Fig1Sweep(benchmark::State& state) {
  const auto v0s = csop::kp::fig1_default_v0_values(20);
  for (auto _ : state) benchmark::DoNotOptimize(csop::kp::fig1_sweep(v0s, mode(state)));
}
BENCHMARK(BM_Fig1Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CriticalQCurve(benchmark::State& state) {
  const auto gap = csop::GapSpectrum::make(0.0, 1.0, 3.0);
  const auto energies = linspace(1.001, 2.999, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(csop::critical_q_curve(gap, energies, mode(state)));
}
BENCHMARK(BM_CriticalQCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AntilinearBatch(benchmark::State& state) {
  std::vector<csop::CMatrix> ms;
  for (int k = 0; k < 32; ++k) {
    csop::CMatrix a = csop::CMatrix::Random(60, 60);
    ms.push_back(a + a.transpose());
  }
  for (auto _ : state) benchmark::DoNotOptimize(csop::antilinear_batch(ms, mode(state)));
}
BENCHMARK(BM_AntilinearBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
