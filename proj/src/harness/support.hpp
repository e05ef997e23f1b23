#pragma once

// Helpers shared by the experiment bodies.

#include <cmath>
#include <string>

#include "qlab/dynamics/loop_set.hpp"
#include "qlab/geometry/models.hpp"
#include "qlab/harness/experiment.hpp"

namespace qlab::harness::detail {

inline dynamics::SweepParams read_sweep(const Config& cfg, const Session& s, std::size_t grid_default,
                                        double T_default = -1.0) {
  dynamics::SweepParams p;
  p.grid_size = static_cast<std::size_t>(cfg.get_int("params.grid_size", static_cast<long>(grid_default), 4, 1 << 16));
  p.T_max = cfg.get_double("params.T_max", T_default);
  p.epsilon_return = cfg.get_double("params.epsilon_return", -1.0);
  p.t_min = cfg.get_double("params.t_min", -1.0);
  p.delta = cfg.get_double("params.delta", 0.05, 0.0, 10.0);
  p.exec = s.exec();
  return p;
}

inline std::string describe(const geometry::ModelSpec& spec) {
  std::string out = spec.kind;
  for (const auto& [k, v] : spec.params) out += " " + k + "=" + v;
  return out;
}

// Angle of a frame direction in the plane (n = 2).
inline double direction_angle(const Vec& v) { return std::atan2(v(1), v(0)); }

inline double angle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

}  // namespace qlab::harness::detail
