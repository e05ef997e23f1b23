#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "qlab/common/errors.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {

RoundSphere::RoundSphere(int n, double radius) : n_(n), r_(radius) {
  if (n < 2) throw DomainError("RoundSphere: dimension must be >= 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("RoundSphere: radius must be positive");
}

std::string RoundSphere::description() const {
  std::ostringstream os;
  os << "round sphere S^" << n_ << " radius " << r_;
  return os.str();
}

Vec RoundSphere::north_pole() const {
  Vec z = Vec::Zero(n_ + 1);
  z(n_) = r_;
  return z;
}

Vec RoundSphere::south_pole() const { return -north_pole(); }

bool RoundSphere::in_chart(const Vec& u) const {
  if (u.size() != n_) return false;
  if (!(u(0) > 0.0 && u(0) < kPi * r_)) return false;
  for (int j = 1; j < n_ - 1; ++j)
    if (!(u(j) > 0.0 && u(j) < kPi)) return false;
  return true;
}

Mat RoundSphere::metric_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("RoundSphere::metric_at: outside chart");
  Mat g = Mat::Zero(n_, n_);
  g(0, 0) = 1.0;
  double prod = std::pow(r_ * std::sin(u(0) / r_), 2);
  for (int i = 1; i < n_; ++i) {
    g(i, i) = prod;
    prod *= std::pow(std::sin(u(i)), 2);
  }
  return g;
}

Christoffel RoundSphere::christoffel_at(const Vec& u) const {
  const Mat g = metric_at(u);
  Vec gd = g.diagonal();
  Mat dg = Mat::Zero(n_, n_);  // dg(m, i) = d_m g_ii
  const double cot_t = std::cos(u(0) / r_) / (r_ * std::sin(u(0) / r_));
  for (int i = 1; i < n_; ++i) {
    dg(0, i) = 2.0 * cot_t * gd(i);
    for (int j = 1; j < i; ++j) dg(j, i) = 2.0 * gd(i) * std::cos(u(j)) / std::sin(u(j));
  }
  return detail::diagonal_christoffel(gd, dg);
}

Vec RoundSphere::chart_to_point(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("RoundSphere::chart_to_point: outside chart");
  Vec x = Vec::Zero(n_ + 1);
  const double st = std::sin(u(0) / r_);
  double prod = 1.0;
  for (int i = 0; i < n_ - 1; ++i) {
    x(i) = r_ * st * prod * std::cos(u(i + 1));
    prod *= std::sin(u(i + 1));
  }
  x(n_ - 1) = r_ * st * prod;
  x(n_) = r_ * std::cos(u(0) / r_);
  return x;
}

void RoundSphere::geodesic_rhs(std::span<const double> y, std::span<double> dy) const {
  const int N = n_ + 1;
  double v2 = 0.0, x2 = 0.0;
  for (int i = 0; i < N; ++i) {
    v2 += y[N + i] * y[N + i];
    x2 += y[i] * y[i];
  }
  const double k = v2 / x2;
  for (int i = 0; i < N; ++i) {
    dy[i] = y[N + i];
    dy[N + i] = -k * y[i];
  }
}

double RoundSphere::speed(std::span<const double> y) const {
  return detail::tail(y, n_ + 1).norm();
}

double RoundSphere::renormalize(std::span<double> y) const {
  const int N = n_ + 1;
  Eigen::Map<Vec> x(y.data(), N), v(y.data() + N, N);
  const double drift = std::abs(v.norm() - 1.0);
  x *= r_ / x.norm();
  const Vec nu = x / r_;
  v -= nu.dot(v) * nu;
  v /= v.norm();
  return drift;
}

double RoundSphere::constraint(const Vec& x) const { return x.norm() - r_; }

Mat RoundSphere::frame(const Vec& z) const {
  if (z.size() != n_ + 1 || std::abs(z.norm() - r_) > 1e-8 * r_)
    throw DomainError("RoundSphere::frame: point not on the sphere");
  return detail::tangent_frame(z / z.norm());
}

std::vector<double> RoundSphere::initial_state(const Vec& z, const Vec& c) const {
  if (c.size() != n_ || !(c.norm() > 0.0)) throw DomainError("RoundSphere::initial_state: bad direction");
  const Mat F = frame(z);
  const Vec v = F * c / c.norm();
  std::vector<double> y(2 * (n_ + 1));
  for (int i = 0; i <= n_; ++i) {
    y[i] = z(i);
    y[n_ + 1 + i] = v(i);
  }
  return y;
}

Vec RoundSphere::frame_components(const Vec& z, std::span<const double> y) const {
  const int N = n_ + 1;
  const Vec a = detail::head(y, N).normalized();
  const Vec b = z.normalized();
  const Vec v = detail::tail(y, N);
  // Rotation in span(a, b) taking a to b: parallel transport along the arc.
  const Vec ab = a + b;
  const double denom = 1.0 + a.dot(b);
  Vec w = v;
  if (denom > 1e-12) w = v - (ab.dot(v) / denom) * ab + 2.0 * a.dot(v) * b;
  return frame(z).transpose() * w;
}

SqDistance RoundSphere::sq_distance(const Vec& z, std::span<const double> y) const {
  const int N = n_ + 1;
  SqDistance d;
  for (int i = 0; i < N; ++i) {
    const double dx = y[i] - z(i);
    d.value += dx * dx;
    d.rate += 2.0 * dx * y[N + i];
  }
  return d;
}

Vec RoundSphere::local_offset(const Vec& x, const Vec& y) const {
  return frame(x).transpose() * (y - x);
}

double RoundSphere::metric_norm(const Vec& z, const Vec& c) const { return (frame(z) * c).norm(); }

Mat RoundSphere::representation_metric(const Vec& /*x*/) const { return Mat::Identity(n_ + 1, n_ + 1); }

Mat RoundSphere::jacobi_curvature(std::span<const double> /*y*/) const {
  return Mat::Identity(n_ - 1, n_ - 1) / (r_ * r_);
}

}  // namespace qlab::geometry
