#include "qlab/geometry/profile.hpp"

#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/common/types.hpp"

namespace qlab::geometry {

Profile Profile::sine() {
  Profile p;
  p.name_ = "sine";
  p.length_ = kPi;
  return p;
}

Profile Profile::bumped_sine(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw DomainError("bumped_sine: width must be positive");
  if (center - width <= 0.0 || center + width >= kPi)
    throw DomainError("bumped_sine: bump must be supported away from the poles");
  Profile p;
  p.name_ = "bumped_sine";
  p.length_ = kPi;
  p.amp_ = amplitude;
  p.center_ = center;
  p.width_ = width;
  // f must stay positive in the interior.
  for (int i = 1; i < 2000; ++i) {
    const double s = kPi * i / 2000.0;
    if (p.jet(s)[0] <= 0.0) throw DomainError("bumped_sine: profile not positive");
  }
  return p;
}

std::array<double, 4> Profile::jet(double s) const {
  std::array<double, 4> j{std::sin(s), std::cos(s), -std::sin(s), -std::cos(s)};
  if (amp_ != 0.0) {
    const double u = (s - center_) / width_;
    if (std::abs(u) < 1.0) {
      const double q = 1.0 - u * u;
      const double w = width_;
      j[0] += amp_ * q * q * q * q;
      j[1] += amp_ * (-8.0 * u * q * q * q) / w;
      j[2] += amp_ * (q * q * (56.0 * u * u - 8.0)) / (w * w);
      j[3] += amp_ * (q * (144.0 * u - 336.0 * u * u * u)) / (w * w * w);
    }
  }
  return j;
}

std::array<double, 4> Profile::extended_jet(double s) const {
  const double L = length_;
  double r = std::fmod(s, 2.0 * L);
  if (r < 0.0) r += 2.0 * L;
  if (r <= L) return jet(r);
  const auto j = jet(2.0 * L - r);
  return {-j[0], j[1], -j[2], j[3]};
}

}  // namespace qlab::geometry
