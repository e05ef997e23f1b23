#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qlab/common/types.hpp"

namespace qlab::geometry {

enum class ModelKind { RoundSphere, FlatTorus, SurfaceOfRevolution, TriaxialEllipsoid };
enum class Representation { Embedded, Chart };

const char* to_string(ModelKind k);

// Gamma^k_ij stored as component(k, i, j).
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int k, int i, int j) { return data_[(k * n_ + i) * n_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(k * n_ + i) * n_ + j]; }

 private:
  int n_;
  std::vector<double> data_;
};

// Squared local distance from a base point and its time derivative along
// the flow. Valid while the state is within the injectivity radius.
struct SqDistance {
  double value = 0.0;
  double rate = 0.0;
};

// A complete Riemannian manifold with the operations the flow needs.
//
// Phase-space states are flat arrays y = (x, p) of length 2 * position_size().
// Embedded models store ambient position and ambient velocity; chart models
// store chart coordinates and the momentum covector. Tangent directions at a
// point are always given by components in the orthonormal frame returned by
// the model at that point.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ModelKind kind() const = 0;
  virtual Representation representation() const = 0;
  virtual int dim() const = 0;
  virtual int position_size() const = 0;
  virtual std::string description() const = 0;

  virtual double injectivity_radius() const = 0;
  virtual double diameter() const = 0;

  // Intrinsic chart (normal polar coordinates for the sphere, (theta, phi)
  // for the ellipsoid, (s, theta) for the surface of revolution, Cartesian
  // coordinates for the torus). Throw DomainError outside the chart.
  virtual bool in_chart(const Vec& u) const = 0;
  virtual Mat metric_at(const Vec& u) const = 0;
  virtual Christoffel christoffel_at(const Vec& u) const = 0;
  virtual Vec chart_to_point(const Vec& u) const = 0;

  // Phase space.
  virtual void geodesic_rhs(std::span<const double> y, std::span<double> dy) const = 0;
  virtual double speed(std::span<const double> y) const = 0;
  // Projects onto the constraint set and rescales to unit speed. Returns the
  // speed drift | |p|_g - 1 | seen before rescaling.
  virtual double renormalize(std::span<double> y) const = 0;
  // Constraint residual of a position (0 for chart models).
  virtual double constraint(const Vec& x) const { (void)x; return 0.0; }

  // Unit-speed state at point z in direction c (frame components, any norm).
  virtual std::vector<double> initial_state(const Vec& z, const Vec& c) const = 0;
  // Frame components at z of the unit velocity of a state close to z,
  // transported to z. Not normalized.
  virtual Vec frame_components(const Vec& z, std::span<const double> y) const = 0;
  // Local squared distance from z to the state position and its rate.
  virtual SqDistance sq_distance(const Vec& z, std::span<const double> y) const = 0;
  // First-order logarithm: components of y relative to x in the frame at x.
  virtual Vec local_offset(const Vec& x, const Vec& y) const = 0;
  // Canonical representative of a position (lattice reduction, folding).
  virtual Vec canonical(const Vec& x) const { return x; }
  // Norm of a tangent vector recomputed through the representation metric.
  virtual double metric_norm(const Vec& z, const Vec& c) const = 0;
  // Metric of the position coordinates (identity for ambient coordinates).
  virtual Mat representation_metric(const Vec& x) const = 0;
  // Curvature operator along the geodesic in a parallel orthonormal frame of
  // the normal bundle, size (n-1) x (n-1).
  virtual Mat jacobi_curvature(std::span<const double> y) const = 0;

  // Orthonormal frame at a point as columns in representation coordinates
  // (velocity components). Throws at coordinate singularities.
  virtual Mat frame(const Vec& z) const = 0;

  // Factor applied to the integrator's relative tolerance. Charts whose
  // Christoffel symbols blow up near turning points ask for a tighter one.
  virtual double tolerance_scale() const { return 1.0; }
};

using ModelPtr = std::shared_ptr<const Manifold>;

// Tangent vector as frame components at a base point.
class TangentVector {
 public:
  TangentVector(Vec base, Vec components);
  const Vec& base() const { return base_; }
  const Vec& components() const { return components_; }
  double norm() const { return norm_; }

 private:
  Vec base_;
  Vec components_;
  double norm_;
};

}  // namespace qlab::geometry
