#pragma once

#include <string>
#include <vector>

#include "qlab/dynamics/loop_set.hpp"

namespace qlab::dynamics {

enum class PointClass { BlowDown, PartialLoops, NegligibleLoops, Undetermined };
const char* to_string(PointClass c);

enum class Stability { Attracting, Repelling, Neutral };
const char* to_string(Stability s);

struct FixedPoint {
  double angle = 0.0;
  double multiplier = 0.0;  // derivative of the lifted return map
  Stability stability = Stability::Neutral;
};

struct ClassificationThresholds {
  double blowdown_fraction = 0.99;
  double time_spread = 1e-3;    // relative spread of first-return times
  double partial_fraction = 0.05;
  double identity_tol = 1e-6;   // |D| below this everywhere: identity map
  double neutral_band = 1e-3;   // |multiplier - 1| below this: neutral
};

struct PointClassification {
  PointClass cls = PointClass::Undetermined;
  double loop_fraction = 0.0;
  double mean_return_time = 0.0;
  double time_spread = 0.0;
  bool identity_map = false;
  std::vector<FixedPoint> fixed_points;  // blow-down points on surfaces only
  LoopSetEstimate estimate;
};

PointClassification classify_point(const Manifold& m, const Vec& z, const SweepParams& p = {},
                                   const ClassificationThresholds& th = {});

// Fixed points of the first-return map on the circle of directions, polished
// by root finding on fresh integrations.
std::vector<FixedPoint> find_fixed_points(const Manifold& m, const Vec& z, const ReturnMapTable& table,
                                          const SweepParams& p, const ClassificationThresholds& th = {});

}  // namespace qlab::dynamics
