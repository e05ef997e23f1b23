#pragma once

#include <vector>

#include "qlab/common/ode.hpp"
#include "qlab/geometry/manifold.hpp"

namespace qlab::geometry {

struct GeodesicTolerance {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = -1.0;         // <= 0: injectivity radius / 8
  double drift_limit = 1e-9;   // per-step speed drift that aborts integration
};

// Integrator for the model's geodesic equations with post-step projection
// and renormalization. If max_drift is given it receives the largest
// per-step drift seen; it must outlive the integrator.
ode::DormandPrince geodesic_integrator(const Manifold& m, const GeodesicTolerance& tol,
                                       double* max_drift = nullptr);

// Flow a state for time t with adaptive steps.
std::vector<double> flow_state(const Manifold& m, std::vector<double> y, double t,
                               const GeodesicTolerance& tol = {});

// Flow with a fixed number of equal steps. The result depends smoothly on
// the initial state, which finite differences need.
std::vector<double> flow_state_fixed(const Manifold& m, std::vector<double> y, double t, int steps);

}  // namespace qlab::geometry
