#pragma once

#include <span>
#include <vector>

#include "csop/antilinear.hpp"
#include "csop/complex_scaling.hpp"
#include "csop/decay_bounds.hpp"
#include "csop/parallel.hpp"
#include "csop/schrodinger.hpp"

/// Data-parallel sweeps. Each takes an Execution; Execution::serial is the
/// reference the parallel path must reproduce exactly.
namespace csop {

struct MapPoint {
  double re = 0.0;
  double im = 0.0;
  double norm = 0.0;  // ||(H - z)^{-1}||, inf on the spectrum
};

/// Resolvent norms on the rectangular grid re x im, row-major in im.
std::vector<MapPoint> resolvent_map(const cs::ScaledHamiltonian& h, std::span<const double> re,
                                    std::span<const double> im, Execution exec = Execution::parallel);

struct QcPoint {
  double e = 0.0;
  double q_c = 0.0;
  double residual = 0.0;
};

std::vector<QcPoint> critical_q_curve(const GapSpectrum& gap, std::span<const double> energies,
                                      Execution exec = Execution::parallel);

/// gamma(q, E) for each q.
std::vector<double> gamma_scan(const DiscreteHamiltonian& h, const GapSpectrum& gap, double e,
                               std::span<const double> qs, Execution exec = Execution::parallel);

/// Antilinear spectra (entrywise conjugation, z = 0) of many matrices.
std::vector<AntilinearSpectrum> antilinear_batch(std::span<const CMatrix> matrices,
                                                 Execution exec = Execution::parallel);

}  // namespace csop
