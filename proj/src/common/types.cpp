#include "qlab/common/types.hpp"

#include <cmath>

#include "qlab/common/errors.hpp"

namespace qlab {

double unit_sphere_area(int d) {
  if (d < 1) throw DomainError("unit_sphere_area: d < 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace qlab
