#pragma once

#include <array>
#include <map>
#include <string>

#include "qlab/geometry/manifold.hpp"
#include "qlab/geometry/profile.hpp"

namespace qlab::geometry {

// Round sphere S^n of radius r embedded in R^{n+1}.
class RoundSphere final : public Manifold {
 public:
  RoundSphere(int n, double radius = 1.0);

  ModelKind kind() const override { return ModelKind::RoundSphere; }
  Representation representation() const override { return Representation::Embedded; }
  int dim() const override { return n_; }
  int position_size() const override { return n_ + 1; }
  std::string description() const override;
  double radius() const { return r_; }
  Vec north_pole() const;
  Vec south_pole() const;

  double injectivity_radius() const override { return kPi * r_; }
  double diameter() const override { return kPi * r_; }

  bool in_chart(const Vec& u) const override;
  Mat metric_at(const Vec& u) const override;
  Christoffel christoffel_at(const Vec& u) const override;
  Vec chart_to_point(const Vec& u) const override;

  void geodesic_rhs(std::span<const double> y, std::span<double> dy) const override;
  double speed(std::span<const double> y) const override;
  double renormalize(std::span<double> y) const override;
  double constraint(const Vec& x) const override;

  std::vector<double> initial_state(const Vec& z, const Vec& c) const override;
  Vec frame_components(const Vec& z, std::span<const double> y) const override;
  SqDistance sq_distance(const Vec& z, std::span<const double> y) const override;
  Vec local_offset(const Vec& x, const Vec& y) const override;
  double metric_norm(const Vec& z, const Vec& c) const override;
  Mat representation_metric(const Vec& x) const override;
  Mat jacobi_curvature(std::span<const double> y) const override;
  Mat frame(const Vec& z) const override;

 private:
  int n_;
  double r_;
};

// Triaxial ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 with a > b > c.
class TriaxialEllipsoid final : public Manifold {
 public:
  TriaxialEllipsoid(double a, double b, double c);

  ModelKind kind() const override { return ModelKind::TriaxialEllipsoid; }
  Representation representation() const override { return Representation::Embedded; }
  int dim() const override { return 2; }
  int position_size() const override { return 3; }
  std::string description() const override;
  std::array<double, 3> axes() const { return {a_, b_, c_}; }
  // The four umbilic points (+-ux, 0, +-uz).
  std::array<Vec, 4> umbilics() const;
  double gaussian_curvature(const Vec& x) const;

  double injectivity_radius() const override { return inj_; }
  double diameter() const override { return diam_; }

  bool in_chart(const Vec& u) const override;
  Mat metric_at(const Vec& u) const override;
  Christoffel christoffel_at(const Vec& u) const override;
  Vec chart_to_point(const Vec& u) const override;

  void geodesic_rhs(std::span<const double> y, std::span<double> dy) const override;
  double speed(std::span<const double> y) const override;
  double renormalize(std::span<double> y) const override;
  double constraint(const Vec& x) const override;

  std::vector<double> initial_state(const Vec& z, const Vec& c) const override;
  Vec frame_components(const Vec& z, std::span<const double> y) const override;
  SqDistance sq_distance(const Vec& z, std::span<const double> y) const override;
  Vec local_offset(const Vec& x, const Vec& y) const override;
  double metric_norm(const Vec& z, const Vec& c) const override;
  Mat representation_metric(const Vec& x) const override;
  Mat jacobi_curvature(std::span<const double> y) const override;
  Mat frame(const Vec& z) const override;

 private:
  Eigen::Vector3d normal(const Eigen::Vector3d& x) const;  // gradient of F
  double a_, b_, c_;
  double inj_ = 0.0, diam_ = 0.0;
};

// Flat torus R^n / (A Z^n); lattice basis vectors are the columns of A.
class FlatTorus final : public Manifold {
 public:
  explicit FlatTorus(Mat lattice);
  static FlatTorus square(int n, double side = 2.0 * kPi);

  ModelKind kind() const override { return ModelKind::FlatTorus; }
  Representation representation() const override { return Representation::Chart; }
  int dim() const override { return n_; }
  int position_size() const override { return n_; }
  std::string description() const override;
  const Mat& lattice() const { return A_; }
  double covolume() const { return std::abs(A_.determinant()); }
  // Shortest representative of x modulo the lattice.
  Vec reduce(const Vec& x) const;

  double injectivity_radius() const override { return inj_; }
  double diameter() const override { return diam_; }

  bool in_chart(const Vec& u) const override;
  Mat metric_at(const Vec& u) const override;
  Christoffel christoffel_at(const Vec& u) const override;
  Vec chart_to_point(const Vec& u) const override;

  void geodesic_rhs(std::span<const double> y, std::span<double> dy) const override;
  double speed(std::span<const double> y) const override;
  double renormalize(std::span<double> y) const override;

  std::vector<double> initial_state(const Vec& z, const Vec& c) const override;
  Vec frame_components(const Vec& z, std::span<const double> y) const override;
  SqDistance sq_distance(const Vec& z, std::span<const double> y) const override;
  Vec local_offset(const Vec& x, const Vec& y) const override;
  Vec canonical(const Vec& x) const override;
  double metric_norm(const Vec& z, const Vec& c) const override;
  Mat representation_metric(const Vec& x) const override;
  Mat jacobi_curvature(std::span<const double> y) const override;
  Mat frame(const Vec& z) const override;

 private:
  int n_;
  Mat A_, Ainv_;
  double inj_ = 0.0, diam_ = 0.0;
};

// Rotationally symmetric sphere ds^2 + f(s)^2 dtheta^2, s in [0, L].
// Positions are (s, theta); the flow runs on the odd 2L-periodic extension of
// f, with (s, theta) ~ (2L - s, theta + pi) ~ (-s, theta + pi).
class SurfaceOfRevolution final : public Manifold {
 public:
  explicit SurfaceOfRevolution(Profile profile);

  ModelKind kind() const override { return ModelKind::SurfaceOfRevolution; }
  Representation representation() const override { return Representation::Chart; }
  int dim() const override { return 2; }
  int position_size() const override { return 2; }
  std::string description() const override;
  const Profile& profile() const { return profile_; }
  double length() const { return profile_.length(); }
  Vec north_pole() const;
  Vec south_pole() const;
  bool is_pole(const Vec& z) const;

  double injectivity_radius() const override { return inj_; }
  double diameter() const override { return profile_.length(); }

  bool in_chart(const Vec& u) const override;
  Mat metric_at(const Vec& u) const override;
  Christoffel christoffel_at(const Vec& u) const override;
  Vec chart_to_point(const Vec& u) const override;

  void geodesic_rhs(std::span<const double> y, std::span<double> dy) const override;
  double speed(std::span<const double> y) const override;
  double renormalize(std::span<double> y) const override;

  std::vector<double> initial_state(const Vec& z, const Vec& c) const override;
  Vec frame_components(const Vec& z, std::span<const double> y) const override;
  SqDistance sq_distance(const Vec& z, std::span<const double> y) const override;
  Vec local_offset(const Vec& x, const Vec& y) const override;
  Vec canonical(const Vec& x) const override;
  double metric_norm(const Vec& z, const Vec& c) const override;
  Mat representation_metric(const Vec& x) const override;
  Mat jacobi_curvature(std::span<const double> y) const override;
  Mat frame(const Vec& z) const override;
  // Clairaut coordinates lose about a digit near turning points.
  double tolerance_scale() const override { return 0.1; }

 private:
  // Pole-Cartesian position and velocity w = s' e_r(theta), s' measured from
  // the pole at s_p and reduced to [-L, L).
  void pole_cartesian(double s_p, std::span<const double> y, Eigen::Vector2d& w,
                      Eigen::Vector2d& wdot) const;
  Vec fold(const Vec& x) const;
  double reduce_from(double s, double s_p) const;
  Profile profile_;
  double inj_ = 0.0;
};

// Model description used by configs and the factory.
struct ModelSpec {
  std::string kind;                          // sphere | torus | sor | ellipsoid
  std::map<std::string, std::string> params; // kind-specific
};

ModelPtr make_model(const ModelSpec& spec);

// Named base point on a model: "pole", "south_pole", "umbilic", "origin",
// or a comma separated coordinate list.
Vec resolve_point(const Manifold& m, const std::string& name);

}  // namespace qlab::geometry
