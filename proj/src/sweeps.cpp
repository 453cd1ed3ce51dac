#include "csop/sweeps.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include <omp.h>

#include "csop/error.hpp"

namespace csop {

void apply_thread_limit_from_env() {
  const char* raw = std::getenv("CSOP_THREADS");
  if (!raw || !*raw) return;
  char* end = nullptr;
  const long threads = std::strtol(raw, &end, 10);
  if (*end != '\0' || threads < 1)
    throw Error(Errc::invalid_argument, std::string("CSOP_THREADS must be a positive integer, got '") + raw + "'");
  omp_set_num_threads(static_cast<int>(threads));
}

std::vector<MapPoint> resolvent_map(const cs::ScaledHamiltonian& h, std::span<const double> re,
                                    std::span<const double> im, Execution exec) {
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(re.size());
  std::vector<MapPoint> out(re.size() * im.size());
  for_each_index(static_cast<std::ptrdiff_t>(out.size()), exec, [&](std::ptrdiff_t k) {
    const double x = re[k % cols];
    const double y = im[k / cols];
    double norm = std::numeric_limits<double>::infinity();
    try {
      norm = cs::resolvent_norm_banded(h, cplx(x, y));
    } catch (const Error& e) {
      if (e.code() != Errc::singular_shift) throw;
    }
    out[k] = {x, y, norm};
  });
  return out;
}

std::vector<QcPoint> critical_q_curve(const GapSpectrum& gap, std::span<const double> energies, Execution exec) {
  std::vector<QcPoint> out(energies.size());
  for_each_index(static_cast<std::ptrdiff_t>(energies.size()), exec, [&](std::ptrdiff_t i) {
    const CriticalQ c = solve_critical_q(gap, energies[i]);
    out[i] = {energies[i], c.q_c, c.residual};
  });
  return out;
}

std::vector<double> gamma_scan(const DiscreteHamiltonian& h, const GapSpectrum& gap, double e,
                               std::span<const double> qs, Execution exec) {
  std::vector<double> out(qs.size());
  for_each_index(static_cast<std::ptrdiff_t>(qs.size()), exec,
                 [&](std::ptrdiff_t i) { out[i] = gamma_norm(h, gap, qs[i], e); });
  return out;
}

std::vector<AntilinearSpectrum> antilinear_batch(std::span<const CMatrix> matrices, Execution exec) {
  std::vector<AntilinearSpectrum> out(matrices.size());
  for_each_index(static_cast<std::ptrdiff_t>(matrices.size()), exec, [&](std::ptrdiff_t i) {
    out[i] = antilinear_spectrum(matrices[i], Conjugation::entrywise(matrices[i].rows()));
  });
  return out;
}

}  // namespace csop
