#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "qlab/common/errors.hpp"
#include "qlab/common/quadrature.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {
namespace {

double ellipse_perimeter(double p, double q) {
  auto f = [&](double t) { return std::sqrt(p * p * std::sin(t) * std::sin(t) + q * q * std::cos(t) * std::cos(t)); };
  return integrate_panels(f, 0.0, 2.0 * kPi, 64, 16);
}

}  // namespace

TriaxialEllipsoid::TriaxialEllipsoid(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(a > b && b > c && c > 0.0)) throw DomainError("TriaxialEllipsoid: need a > b > c > 0");
  // Klingenberg-type estimate: conjugate radius from the curvature maximum
  // (attained at the (+-a, 0, 0) vertices) against half the shortest
  // principal section.
  const double kmax = a * a / (b * b * c * c);
  inj_ = std::min(kPi / std::sqrt(kmax), 0.5 * ellipse_perimeter(b, c));
  diam_ = 0.5 * ellipse_perimeter(a, b);
}

std::string TriaxialEllipsoid::description() const {
  std::ostringstream os;
  os << "triaxial ellipsoid (" << a_ << ", " << b_ << ", " << c_ << ")";
  return os.str();
}

std::array<Vec, 4> TriaxialEllipsoid::umbilics() const {
  const double d = a_ * a_ - c_ * c_;
  const double ux = a_ * std::sqrt((a_ * a_ - b_ * b_) / d);
  const double uz = c_ * std::sqrt((b_ * b_ - c_ * c_) / d);
  std::array<Vec, 4> out;
  int k = 0;
  for (double sx : {1.0, -1.0})
    for (double sz : {1.0, -1.0}) out[k++] = Eigen::Vector3d(sx * ux, 0.0, sz * uz);
  return out;
}

double TriaxialEllipsoid::gaussian_curvature(const Vec& x) const {
  const double q = x(0) * x(0) / std::pow(a_, 4) + x(1) * x(1) / std::pow(b_, 4) +
                   x(2) * x(2) / std::pow(c_, 4);
  return 1.0 / (a_ * a_ * b_ * b_ * c_ * c_ * q * q);
}

Eigen::Vector3d TriaxialEllipsoid::normal(const Eigen::Vector3d& x) const {
  return {2.0 * x(0) / (a_ * a_), 2.0 * x(1) / (b_ * b_), 2.0 * x(2) / (c_ * c_)};
}

bool TriaxialEllipsoid::in_chart(const Vec& u) const {
  return u.size() == 2 && u(0) > 0.0 && u(0) < kPi;
}

Vec TriaxialEllipsoid::chart_to_point(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("TriaxialEllipsoid::chart_to_point: outside chart");
  return Eigen::Vector3d(a_ * std::sin(u(0)) * std::cos(u(1)), b_ * std::sin(u(0)) * std::sin(u(1)),
                         c_ * std::cos(u(0)));
}

Mat TriaxialEllipsoid::metric_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("TriaxialEllipsoid::metric_at: outside chart");
  const double st = std::sin(u(0)), ct = std::cos(u(0)), sp = std::sin(u(1)), cp = std::cos(u(1));
  Eigen::Matrix<double, 3, 2> J;
  J << a_ * ct * cp, -a_ * st * sp, b_ * ct * sp, b_ * st * cp, -c_ * st, 0.0;
  return J.transpose() * J;
}

Christoffel TriaxialEllipsoid::christoffel_at(const Vec& u) const {
  const Mat g = metric_at(u);
  const double st = std::sin(u(0)), ct = std::cos(u(0)), sp = std::sin(u(1)), cp = std::cos(u(1));
  Eigen::Vector3d X[2] = {{a_ * ct * cp, b_ * ct * sp, -c_ * st}, {-a_ * st * sp, b_ * st * cp, 0.0}};
  Eigen::Vector3d XX[2][2];
  XX[0][0] = {-a_ * st * cp, -b_ * st * sp, -c_ * ct};
  XX[0][1] = XX[1][0] = Eigen::Vector3d(-a_ * ct * sp, b_ * ct * cp, 0.0);
  XX[1][1] = {-a_ * st * cp, -b_ * st * sp, 0.0};
  const Mat gi = g.inverse();
  Christoffel G(2);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        for (int l = 0; l < 2; ++l) v += gi(k, l) * X[l].dot(XX[i][j]);
        G(k, i, j) = v;
      }
  return G;
}

void TriaxialEllipsoid::geodesic_rhs(std::span<const double> y, std::span<double> dy) const {
  const double h[3] = {2.0 / (a_ * a_), 2.0 / (b_ * b_), 2.0 / (c_ * c_)};
  double vhv = 0.0, nn = 0.0, n[3];
  for (int i = 0; i < 3; ++i) {
    n[i] = h[i] * y[i];
    vhv += h[i] * y[3 + i] * y[3 + i];
    nn += n[i] * n[i];
  }
  const double lam = vhv / nn;
  for (int i = 0; i < 3; ++i) {
    dy[i] = y[3 + i];
    dy[3 + i] = -lam * n[i];
  }
}

double TriaxialEllipsoid::speed(std::span<const double> y) const {
  return detail::tail(y, 3).norm();
}

double TriaxialEllipsoid::constraint(const Vec& x) const {
  return x(0) * x(0) / (a_ * a_) + x(1) * x(1) / (b_ * b_) + x(2) * x(2) / (c_ * c_) - 1.0;
}

double TriaxialEllipsoid::renormalize(std::span<double> y) const {
  Eigen::Map<Eigen::Vector3d> x(y.data()), v(y.data() + 3);
  const double drift = std::abs(v.norm() - 1.0);
  for (int it = 0; it < 3; ++it) {
    const Eigen::Vector3d n = normal(x);
    x -= constraint(x) * n / n.squaredNorm();
  }
  const Eigen::Vector3d nu = normal(x).normalized();
  v -= nu.dot(v) * nu;
  v /= v.norm();
  return drift;
}

Mat TriaxialEllipsoid::frame(const Vec& z) const {
  if (z.size() != 3 || std::abs(constraint(z)) > 1e-8)
    throw DomainError("TriaxialEllipsoid::frame: point not on the ellipsoid");
  return detail::tangent_frame(normal(z).normalized());
}

std::vector<double> TriaxialEllipsoid::initial_state(const Vec& z, const Vec& c) const {
  if (c.size() != 2 || !(c.norm() > 0.0)) throw DomainError("TriaxialEllipsoid::initial_state: bad direction");
  const Vec v = frame(z) * c / c.norm();
  return {z(0), z(1), z(2), v(0), v(1), v(2)};
}

Vec TriaxialEllipsoid::frame_components(const Vec& z, std::span<const double> y) const {
  // Tangent-plane projection; the transport error is second order in the
  // distance, which is below the return tolerance.
  return frame(z).transpose() * detail::tail(y, 3);
}

SqDistance TriaxialEllipsoid::sq_distance(const Vec& z, std::span<const double> y) const {
  SqDistance d;
  for (int i = 0; i < 3; ++i) {
    const double dx = y[i] - z(i);
    d.value += dx * dx;
    d.rate += 2.0 * dx * y[3 + i];
  }
  return d;
}

Vec TriaxialEllipsoid::local_offset(const Vec& x, const Vec& y) const {
  return frame(x).transpose() * (y - x);
}

double TriaxialEllipsoid::metric_norm(const Vec& z, const Vec& c) const { return (frame(z) * c).norm(); }

Mat TriaxialEllipsoid::representation_metric(const Vec& /*x*/) const { return Mat::Identity(3, 3); }

Mat TriaxialEllipsoid::jacobi_curvature(std::span<const double> y) const {
  Mat k(1, 1);
  k(0, 0) = gaussian_curvature(detail::head(y, 3));
  return k;
}

}  // namespace qlab::geometry
