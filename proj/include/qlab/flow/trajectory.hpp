#pragma once

#include <iosfwd>
#include <vector>

#include "qlab/common/ode.hpp"
#include "qlab/geometry/geodesic.hpp"
#include "qlab/geometry/manifold.hpp"

namespace qlab::flow {

using geometry::GeodesicTolerance;
using geometry::Manifold;

// Point in the unit cosphere bundle: position and momentum in the model's
// representation coordinates (ambient velocity for embedded models).
struct CotangentState {
  Vec x;
  Vec xi;
  double t = 0.0;
};

CotangentState make_state(const Manifold& m, const Vec& z, const Vec& direction);
std::vector<double> pack(const CotangentState& s);
CotangentState unpack(std::span<const double> y, int position_size, double t);

class Trajectory {
 public:
  Trajectory(const Manifold& m, std::vector<ode::DenseStep> steps, double max_drift);

  double t_end() const { return steps_.empty() ? 0.0 : steps_.back().t1(); }
  CotangentState state_at(double t) const;
  const std::vector<ode::DenseStep>& steps() const { return steps_; }
  // Largest per-step speed drift before renormalization.
  double max_speed_drift() const { return max_drift_; }
  // Sup of | |xi|_g - 1 | over `samples` points of the dense output.
  double speed_deviation(int samples_per_step = 4) const;
  double max_constraint_residual() const;
  void write_csv(std::ostream& os, double dt) const;

 private:
  const Manifold* m_;
  std::vector<ode::DenseStep> steps_;
  double max_drift_;
};

// Integrates the unit-speed geodesic flow on [0, T_max]. Throws DomainError
// for a state off the cosphere bundle and NumericalError on tolerance loss.
Trajectory integrate(const Manifold& m, const CotangentState& init, double T_max,
                     const GeodesicTolerance& tol = {});

// Uniform angles on S^1 (n = 2) or a Fibonacci lattice on S^2 (n = 3).
// `staggered` shifts the circle grid by half a step, which keeps it off the
// multiples of pi/4 where flat tori have short closed geodesics.
std::vector<Vec> direction_grid(int n, std::size_t count, bool staggered = false);

}  // namespace qlab::flow
