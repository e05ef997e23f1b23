#include "qlab/geometry/maps.hpp"

#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {
namespace {

int fixed_steps(const Manifold& m, double len) {
  return 16 + static_cast<int>(std::ceil(400.0 * len / m.injectivity_radius()));
}

Vec position(const Manifold& m, const std::vector<double>& y) {
  return Eigen::Map<const Vec>(y.data(), m.position_size());
}

}  // namespace

Vec exp_map(const Manifold& m, const TangentVector& v, const GeodesicTolerance& tol) {
  if (v.norm() == 0.0) return m.canonical(v.base());
  auto y = flow_state(m, m.initial_state(v.base(), v.components()), v.norm(), tol);
  return m.canonical(position(m, y));
}

Vec exp_map_smooth(const Manifold& m, const Vec& z, const Vec& c) {
  const double len = c.norm();
  if (len == 0.0) return z;
  auto y = flow_state_fixed(m, m.initial_state(z, c), len, fixed_steps(m, len));
  return position(m, y);
}

TangentVector log_map(const Manifold& m, const Vec& z, const Vec& x) {
  const int n = m.dim();
  const double inj = m.injectivity_radius();
  if (const auto* t = dynamic_cast<const FlatTorus*>(&m)) {
    const Vec d = t->reduce(x - z);
    if (d.norm() >= inj) throw DomainError("log_map: point beyond the injectivity radius");
    return TangentVector(z, d);
  }
  const bool embedded = m.representation() == Representation::Embedded;
  Vec v = m.local_offset(z, x);
  if (v.norm() < 1e-14) {
    if (embedded && (x - z).norm() > 1e-10) throw DomainError("log_map: point beyond the injectivity radius");
    return TangentVector(z, Vec::Zero(n));
  }
  // The chord underestimates the distance; start from its length.
  if (embedded) v *= (x - z).norm() / v.norm();
  if (v.norm() > 1.2 * inj) throw DomainError("log_map: point beyond the injectivity radius");

  // Ambient residual for embedded models: the tangential offset alone also
  // vanishes at the antipodal image.
  auto residual = [&](const Vec& w) -> Vec {
    const Vec y = exp_map_smooth(m, z, w);
    if (embedded) return y - x;
    return m.local_offset(x, m.canonical(y));
  };
  Vec r = residual(v);
  for (int it = 0; it < 60; ++it) {
    if (r.norm() < 1e-13 * std::max(1.0, inj)) break;
    const double h = 1e-6 * std::max(1.0, v.norm());
    Mat J(r.size(), n);
    for (int i = 0; i < n; ++i) {
      Vec vp = v, vm = v;
      vp(i) += h;
      vm(i) -= h;
      J.col(i) = (residual(vp) - residual(vm)) / (2.0 * h);
    }
    Vec dv = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    Vec vn = v + dv, rn = residual(vn);
    for (int k = 0; k < 20 && rn.norm() >= r.norm(); ++k) {
      lambda *= 0.5;
      vn = v + lambda * dv;
      rn = residual(vn);
    }
    if (rn.norm() >= r.norm() && r.norm() > 1e-10) throw NumericalError("log_map: Newton stalled");
    v = vn;
    r = rn;
    if (v.norm() >= inj) throw DomainError("log_map: point beyond the injectivity radius");
  }
  if (r.norm() > 1e-9) throw NumericalError("log_map: Newton did not converge");
  return TangentVector(z, v);
}

Vec normal_coordinates(const Manifold& m, const Vec& z, const Vec& x) { return log_map(m, z, x).components(); }

Mat normal_coordinate_metric(const Manifold& m, const Vec& z, const Vec& x_nc) {
  const int n = m.dim();
  if (x_nc.size() != n) throw DomainError("normal_coordinate_metric: dimension mismatch");
  if (x_nc.norm() >= m.injectivity_radius()) throw DomainError("normal_coordinate_metric: outside the normal chart");
  if (x_nc.norm() < 1e-12) return Mat::Identity(n, n);
  const int P = m.position_size();
  auto central = [&](double h) {
    Mat D(P, n);
    for (int i = 0; i < n; ++i) {
      Vec a = x_nc, b = x_nc;
      a(i) += h;
      b(i) -= h;
      D.col(i) = (exp_map_smooth(m, z, a) - exp_map_smooth(m, z, b)) / (2.0 * h);
    }
    return D;
  };
  const double h = std::min(1e-3, 1e-2 * x_nc.norm());
  const Mat D = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  const Mat G = m.representation_metric(exp_map_smooth(m, z, x_nc));
  return D.transpose() * G * D;
}

}  // namespace qlab::geometry
