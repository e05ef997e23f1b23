#pragma once

#include <array>
#include <string>

namespace qlab::geometry {

// Meridian profile f on [0, L] of a surface of revolution.
// jet(s) returns (f, f', f'', f''') at s in [0, L].
class Profile {
 public:
  // f(s) = sin(s) on [0, pi].
  static Profile sine();
  // sin(s) + amplitude * (1 - u^2)^4 with u = (s - center) / width, |u| < 1.
  static Profile bumped_sine(double amplitude, double center, double width);

  double length() const { return length_; }
  std::array<double, 4> jet(double s) const;
  // Odd, 2L-periodic extension and its derivatives at any real s.
  std::array<double, 4> extended_jet(double s) const;
  const std::string& name() const { return name_; }
  double bump_amplitude() const { return amp_; }
  double bump_center() const { return center_; }
  double bump_width() const { return width_; }

 private:
  std::string name_;
  double length_ = 0.0;
  double amp_ = 0.0, center_ = 0.0, width_ = 1.0;
};

}  // namespace qlab::geometry
