#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <numbers>

namespace qlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Surface area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int d);

// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace qlab
