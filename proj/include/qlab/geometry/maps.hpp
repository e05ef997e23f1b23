#pragma once

#include "qlab/geometry/geodesic.hpp"
#include "qlab/geometry/manifold.hpp"

namespace qlab::geometry {

// Endpoint of the geodesic from v.base() with initial velocity v, in
// canonical position coordinates.
Vec exp_map(const Manifold& m, const TangentVector& v, const GeodesicTolerance& tol = {});

// Same endpoint without canonical reduction, from a fixed-step integration
// that is smooth in v.
Vec exp_map_smooth(const Manifold& m, const Vec& z, const Vec& c);

// Inverse of exp within the injectivity radius (Newton shooting; closed
// form on the torus). Throws DomainError beyond the injectivity radius and
// NumericalError if Newton fails.
TangentVector log_map(const Manifold& m, const Vec& z, const Vec& x);

// Geodesic normal coordinates of x centred at z (frame components of log).
Vec normal_coordinates(const Manifold& m, const Vec& z, const Vec& x);

// Metric in normal coordinates at the point with coordinates x_nc, as
// D^T G D with D the differential of exp (Richardson-extrapolated central
// differences) and G the metric of the representation coordinates.
Mat normal_coordinate_metric(const Manifold& m, const Vec& z, const Vec& x_nc);

}  // namespace qlab::geometry
