#include "qlab/geometry/geodesic.hpp"

#include <sstream>

#include "qlab/common/errors.hpp"

namespace qlab::geometry {

ode::DormandPrince geodesic_integrator(const Manifold& m, const GeodesicTolerance& tol, double* max_drift) {
  ode::Tolerance t;
  t.rtol = tol.rtol * m.tolerance_scale();
  t.atol = tol.atol * m.tolerance_scale();
  t.h_max = tol.h_max > 0.0 ? tol.h_max : m.injectivity_radius() / 8.0;
  const double limit = tol.drift_limit;
  auto rhs = [&m](std::span<const double> y, std::span<double> dy) { m.geodesic_rhs(y, dy); };
  auto proj = [&m, limit, max_drift](std::span<double> y) {
    const double d = m.renormalize(y);
    if (max_drift && d > *max_drift) *max_drift = d;
    if (!(d <= limit)) {
      std::ostringstream os;
      os << "geodesic flow: speed drift " << d << " exceeds " << limit;
      throw NumericalError(os.str());
    }
  };
  return ode::DormandPrince(rhs, t, proj);
}

std::vector<double> flow_state(const Manifold& m, std::vector<double> y, double t, const GeodesicTolerance& tol) {
  if (t < 0.0) throw DomainError("flow_state: negative time");
  auto integ = geodesic_integrator(m, tol);
  return integ.integrate(0.0, t, std::move(y)).y_end;
}

std::vector<double> flow_state_fixed(const Manifold& m, std::vector<double> y, double t, int steps) {
  if (steps < 1) throw DomainError("flow_state_fixed: steps < 1");
  ode::Tolerance tol;
  auto rhs = [&m](std::span<const double> s, std::span<double> ds) { m.geodesic_rhs(s, ds); };
  ode::DormandPrince integ(rhs, tol);
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    y = integ.step(y, h);
    m.renormalize(y);
  }
  return y;
}

}  // namespace qlab::geometry
