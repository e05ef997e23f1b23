#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qlab/flow/trajectory.hpp"

namespace qlab::flow {

struct ReturnRecord {
  double time = 0.0;
  Vec direction;     // unit frame components at z of the returning velocity
  double miss = 0.0; // local distance to z at the return time
  double gap = 0.0;  // angle between returning and initial direction
};

struct ReturnOptions {
  double epsilon_return = -1.0;  // <= 0: 1e-4 * diameter
  double t_min = -1.0;           // <= 0: 1e-3 * diameter
  std::size_t max_returns = std::numeric_limits<std::size_t>::max();
  double stop_gap = -1.0;        // stop after the first return with gap <= stop_gap
  GeodesicTolerance tol;
};

double default_epsilon_return(const Manifold& m);
double default_t_min(const Manifold& m);

// Returns of the geodesic from z in direction xi (frame components) to within
// epsilon_return of z, ordered by time, up to T_max.
std::vector<ReturnRecord> detect_returns(const Manifold& m, const Vec& z, const Vec& xi, double T_max,
                                         const ReturnOptions& opt = {});

}  // namespace qlab::flow
