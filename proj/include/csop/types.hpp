#pragma once

#include <complex>

#include <Eigen/Dense>

namespace csop {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Absolute floor applied to every tolerance that is stated relative to a norm.
inline constexpr double kNormFloor = 1e-14;

}  // namespace csop
