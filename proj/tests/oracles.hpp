#pragma once

// Reference computations the library is checked against. Nothing here calls
// into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline CMatrix random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix m = random_complex(n, n, rng);
  return 0.5 * (m + m.transpose());
}

inline CVector random_unit(Eigen::Index n, std::mt19937_64& rng) {
  CVector v = random_complex(n, 1, rng);
  return v / v.norm();
}

// ascending
inline RVector singular_values(const CMatrix& a) {
  Eigen::BDCSVD<CMatrix> svd(a);
  RVector s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

inline double spectral_norm(const CMatrix& a) { return singular_values(a).maxCoeff(); }

// ||(A - z)^{-1}|| through an explicit inverse
inline double resolvent_norm_by_inverse(const CMatrix& a, cplx z) {
  CMatrix shifted = a;
  shifted.diagonal().array() -= z;
  return spectral_norm(shifted.partialPivLu().inverse());
}

// Half trace of the one-cell transfer matrix of -u'' + v0 delta(x - 1) u = E u
// for E > 0: free propagation over the cell, then the derivative kick.
inline double kp_half_trace(double v0, double e) {
  const double k = std::sqrt(e);
  Eigen::Matrix2d free;
  free << std::cos(k), std::sin(k) / k, -k * std::sin(k), std::cos(k);
  Eigen::Matrix2d kick;
  kick << 1.0, 0.0, v0, 1.0;
  return 0.5 * (kick * free).trace();
}

// q_c^2 is the positive root of t^2 + (b - a + 4 E_minus) t - a b with
// a = E_plus - E, b = E - E_minus.
inline double critical_q(double e_minus, double e_plus, double e) {
  const double a = e_plus - e;
  const double b = e - e_minus;
  const double p = b - a + 4.0 * e_minus;
  const double t = 2.0 * a * b / (p + std::sqrt(p * p + 4.0 * a * b));
  return std::sqrt(t);
}

// min |z - r e^{-2 i phi}| over r in [0, r_max], by sampling then golden
// section on the best bracket
inline double ray_distance(cplx z, double phi, double r_max, int samples = 20000) {
  const cplx dir = std::polar(1.0, -2.0 * phi);
  auto dist = [&](double r) { return std::abs(z - r * dir); };
  int best = 0;
  double best_d = dist(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double d = dist(r_max * i / samples);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double lo = r_max * std::max(best - 1, 0) / samples;
  double hi = r_max * std::min(best + 1, samples) / samples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (dist(m1) < dist(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(best_d, dist(0.5 * (lo + hi)));
}

struct ChainFit {
  double q_fit = 0.0;
  double gap_ratio = 0.0;  // (lowest empty - highest filled) / mean lower-band spacing
  int samples = 0;
};

// Density-matrix decay of a finite Kronig-Penney chain: `cells` unit cells
// with Dirichlet walls, grid spacing 1/per_cell so every delta sits on a grid
// point (weight v0/h there), dense eigendecomposition, projector onto the
// lowest `cells` states, ball averages of radius eps around mid-cell points,
// and a fit of log|P(s)| + 0.5 log s against s over integer separations in
// [lo, hi] * cells.
inline ChainFit finite_chain_fit(double v0, int cells, int per_cell, double lo = 0.2, double hi = 0.6,
                                 double eps = 0.1) {
  const int n = cells * per_cell - 1;
  const double h = 1.0 / per_cell;
  RVector diag(n);
  RVector sub = RVector::Constant(n - 1, -1.0 / (h * h));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 / (h * h) + ((i + 1) % per_cell == 0 ? v0 / h : 0.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver;
  solver.computeFromTridiagonal(diag, sub);
  const RVector& ev = solver.eigenvalues();
  const RMatrix filled = solver.eigenvectors().leftCols(cells);

  ChainFit out;
  out.gap_ratio = (ev(cells) - ev(cells - 1)) / ((ev(cells - 1) - ev(0)) / (cells - 1));

  auto ball_sum = [&](double x) {
    RVector acc = RVector::Zero(cells);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const double xi = (i + 1) * h;
      if (std::abs(xi - x) <= eps + 1e-12) {
        acc += filled.row(i).transpose();
        ++count;
      }
    }
    return RVector(acc / count);
  };
  const double x1 = std::floor(lo * cells) + 0.5;
  const RVector c1 = ball_sum(x1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double s = std::ceil(lo * cells); s <= std::floor(hi * cells); s += 1.0) {
    const double p = std::abs(c1.dot(ball_sum(x1 + s)));
    const double y = std::log(p) + 0.5 * std::log(s);
    sx += s;
    sy += y;
    sxx += s * s;
    sxy += s * y;
    ++out.samples;
  }
  const double m = out.samples;
  out.q_fit = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace oracle
