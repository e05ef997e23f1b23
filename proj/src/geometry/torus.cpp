#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "qlab/common/errors.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {

FlatTorus::FlatTorus(Mat lattice) : n_(static_cast<int>(lattice.rows())), A_(std::move(lattice)) {
  if (A_.rows() != A_.cols() || n_ < 2 || n_ > 3) throw DomainError("FlatTorus: lattice must be 2x2 or 3x3");
  if (std::abs(A_.determinant()) < 1e-12) throw DomainError("FlatTorus: degenerate lattice");
  Ainv_ = A_.inverse();
  // Shortest lattice vector by enumeration of small coefficients.
  double shortest = kInf;
  const int R = 2;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(n_, -R);
  while (true) {
    if (!k.isZero()) shortest = std::min(shortest, (A_ * k.cast<double>()).norm());
    int i = 0;
    while (i < n_ && ++k(i) > R) k(i++) = -R;
    if (i == n_) break;
  }
  inj_ = 0.5 * shortest;
  // Covering radius sampled over the fundamental cell.
  const int m = n_ == 2 ? 64 : 24;
  double far = 0.0;
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(n_);
  while (true) {
    const Vec u = idx.cast<double>() / m;
    far = std::max(far, reduce(A_ * u).norm());
    int i = 0;
    while (i < n_ && ++idx(i) >= m) idx(i++) = 0;
    if (i == n_) break;
  }
  diam_ = far;
}

FlatTorus FlatTorus::square(int n, double side) { return FlatTorus(Mat::Identity(n, n) * side); }

std::string FlatTorus::description() const {
  std::ostringstream os;
  os << "flat torus T^" << n_ << " covolume " << covolume();
  return os.str();
}

Vec FlatTorus::reduce(const Vec& x) const {
  Vec u = Ainv_ * x;
  for (int i = 0; i < n_; ++i) u(i) -= std::round(u(i));
  Vec best = A_ * u;
  double best2 = best.squaredNorm();
  Eigen::VectorXi k = Eigen::VectorXi::Constant(n_, -1);
  while (true) {
    const Vec cand = best - A_ * k.cast<double>();
    if (cand.squaredNorm() < best2 - 1e-15) {
      best2 = cand.squaredNorm();
      best = cand;
    }
    int i = 0;
    while (i < n_ && ++k(i) > 1) k(i++) = -1;
    if (i == n_) break;
  }
  return best;
}

Vec FlatTorus::canonical(const Vec& x) const {
  Vec u = Ainv_ * x;
  for (int i = 0; i < n_; ++i) u(i) -= std::floor(u(i));
  return A_ * u;
}

bool FlatTorus::in_chart(const Vec& u) const { return u.size() == n_ && u.allFinite(); }

Mat FlatTorus::metric_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("FlatTorus::metric_at: bad point");
  return Mat::Identity(n_, n_);
}

Christoffel FlatTorus::christoffel_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("FlatTorus::christoffel_at: bad point");
  return Christoffel(n_);
}

Vec FlatTorus::chart_to_point(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("FlatTorus::chart_to_point: bad point");
  return canonical(u);
}

void FlatTorus::geodesic_rhs(std::span<const double> y, std::span<double> dy) const {
  for (int i = 0; i < n_; ++i) {
    dy[i] = y[n_ + i];
    dy[n_ + i] = 0.0;
  }
}

double FlatTorus::speed(std::span<const double> y) const { return detail::tail(y, n_).norm(); }

double FlatTorus::renormalize(std::span<double> y) const {
  Eigen::Map<Vec> p(y.data() + n_, n_);
  const double s = p.norm();
  p /= s;
  return std::abs(s - 1.0);
}

Mat FlatTorus::frame(const Vec& /*z*/) const { return Mat::Identity(n_, n_); }

std::vector<double> FlatTorus::initial_state(const Vec& z, const Vec& c) const {
  if (c.size() != n_ || !(c.norm() > 0.0) || z.size() != n_) throw DomainError("FlatTorus::initial_state: bad input");
  std::vector<double> y(2 * n_);
  const Vec v = c / c.norm();
  for (int i = 0; i < n_; ++i) {
    y[i] = z(i);
    y[n_ + i] = v(i);
  }
  return y;
}

Vec FlatTorus::frame_components(const Vec& /*z*/, std::span<const double> y) const {
  return detail::tail(y, n_);
}

SqDistance FlatTorus::sq_distance(const Vec& z, std::span<const double> y) const {
  const Vec d = reduce(detail::head(y, n_) - z);
  const Vec p = detail::tail(y, n_);
  return {d.squaredNorm(), 2.0 * d.dot(p)};
}

Vec FlatTorus::local_offset(const Vec& x, const Vec& y) const { return reduce(y - x); }

double FlatTorus::metric_norm(const Vec& /*z*/, const Vec& c) const { return c.norm(); }

Mat FlatTorus::representation_metric(const Vec& /*x*/) const { return Mat::Identity(n_, n_); }

Mat FlatTorus::jacobi_curvature(std::span<const double> /*y*/) const { return Mat::Zero(n_ - 1, n_ - 1); }

}  // namespace qlab::geometry
