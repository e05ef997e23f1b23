#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "qlab/common/errors.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {
namespace {

constexpr double kPoleTol = 1e-12;
constexpr double kCapFraction = 0.25;
constexpr double kPoleTaylor = 1e-4;

Eigen::Vector2d e_r(double t) { return {std::cos(t), std::sin(t)}; }
Eigen::Vector2d e_t(double t) { return {-std::sin(t), std::cos(t)}; }

}  // namespace

SurfaceOfRevolution::SurfaceOfRevolution(Profile profile) : profile_(std::move(profile)) {
  const double L = profile_.length();
  const auto j0 = profile_.jet(0.0), jL = profile_.jet(L);
  if (std::abs(j0[0]) > 1e-12 || std::abs(jL[0]) > 1e-12 || std::abs(j0[1] - 1.0) > 1e-12 ||
      std::abs(jL[1] + 1.0) > 1e-12)
    throw DomainError("SurfaceOfRevolution: profile must vanish at the ends with |f'| = 1");
  // Klingenberg-type estimate: min(pi / sqrt(K_max), half the longest
  // parallel, L).
  double kmax = 0.0, fmax = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = L * i / 4000.0;
    std::vector<double> y{s, 0.0, 1.0, 0.0};
    kmax = std::max(kmax, jacobi_curvature(y)(0, 0));
    fmax = std::max(fmax, profile_.jet(s)[0]);
  }
  inj_ = L;
  if (kmax > 0.0) inj_ = std::min(inj_, kPi / std::sqrt(kmax));
  inj_ = std::min(inj_, kPi * fmax);
}

std::string SurfaceOfRevolution::description() const {
  std::ostringstream os;
  os << "surface of revolution profile " << profile_.name();
  if (profile_.bump_amplitude() != 0.0)
    os << " (bump " << profile_.bump_amplitude() << " at " << profile_.bump_center() << " width "
       << profile_.bump_width() << ")";
  return os.str();
}

Vec SurfaceOfRevolution::north_pole() const { return Eigen::Vector2d(0.0, 0.0); }
Vec SurfaceOfRevolution::south_pole() const { return Eigen::Vector2d(length(), 0.0); }

bool SurfaceOfRevolution::is_pole(const Vec& z) const {
  const Vec c = canonical(z);
  return c(0) < kPoleTol || c(0) > length() - kPoleTol;
}

double SurfaceOfRevolution::reduce_from(double s, double s_p) const {
  const double L2 = 2.0 * length();
  return s - s_p - L2 * std::round((s - s_p) / L2);
}

Vec SurfaceOfRevolution::fold(const Vec& x) const {
  const double L = length();
  double s = std::fmod(x(0), 2.0 * L);
  if (s < 0.0) s += 2.0 * L;
  double th = x(1);
  if (s > L) {
    s = 2.0 * L - s;
    th += kPi;
  }
  th = std::fmod(th, 2.0 * kPi);
  if (th < 0.0) th += 2.0 * kPi;
  return Eigen::Vector2d(s, th);
}

Vec SurfaceOfRevolution::canonical(const Vec& x) const { return fold(x); }

bool SurfaceOfRevolution::in_chart(const Vec& u) const {
  return u.size() == 2 && u(0) > 0.0 && u(0) < length() && std::isfinite(u(1));
}

Mat SurfaceOfRevolution::metric_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("SurfaceOfRevolution::metric_at: outside chart");
  const double f = profile_.jet(u(0))[0];
  Mat g = Mat::Identity(2, 2);
  g(1, 1) = f * f;
  return g;
}

Christoffel SurfaceOfRevolution::christoffel_at(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("SurfaceOfRevolution::christoffel_at: outside chart");
  const auto j = profile_.jet(u(0));
  Christoffel G(2);
  G(0, 1, 1) = -j[0] * j[1];
  G(1, 0, 1) = G(1, 1, 0) = j[1] / j[0];
  return G;
}

Vec SurfaceOfRevolution::chart_to_point(const Vec& u) const {
  if (!in_chart(u)) throw DomainError("SurfaceOfRevolution::chart_to_point: outside chart");
  return fold(u);
}

void SurfaceOfRevolution::geodesic_rhs(std::span<const double> y, std::span<double> dy) const {
  const double xs = y[2], xt = y[3];
  dy[0] = xs;
  dy[3] = 0.0;
  if (xt == 0.0) {
    // Meridian: exactly zero angular terms, also through the poles.
    dy[1] = 0.0;
    dy[2] = 0.0;
    return;
  }
  const auto j = profile_.extended_jet(y[0]);
  const double f = j[0];
  dy[1] = xt / (f * f);
  dy[2] = xt * xt * j[1] / (f * f * f);
}

double SurfaceOfRevolution::speed(std::span<const double> y) const {
  if (y[3] == 0.0) return std::abs(y[2]);
  const double f = profile_.extended_jet(y[0])[0];
  return std::sqrt(y[2] * y[2] + y[3] * y[3] / (f * f));
}

double SurfaceOfRevolution::renormalize(std::span<double> y) const {
  const double s = speed(y);
  y[2] /= s;
  y[3] /= s;
  return std::abs(s - 1.0);
}

Mat SurfaceOfRevolution::frame(const Vec& z) const {
  const Vec c = fold(z);
  if (is_pole(c)) throw DomainError("SurfaceOfRevolution::frame: coordinate singularity at a pole");
  const double f = profile_.jet(c(0))[0];
  Mat F = Mat::Zero(2, 2);
  F(0, 0) = 1.0;
  F(1, 1) = 1.0 / f;
  return F;
}

std::vector<double> SurfaceOfRevolution::initial_state(const Vec& z, const Vec& c) const {
  if (c.size() != 2 || !(c.norm() > 0.0) || z.size() != 2)
    throw DomainError("SurfaceOfRevolution::initial_state: bad input");
  const Vec zc = fold(z);
  const Vec u = c / c.norm();
  if (is_pole(zc)) {
    const double sp = zc(0) < 0.5 * length() ? 0.0 : length();
    return {sp, std::atan2(u(1), u(0)), 1.0, 0.0};
  }
  const double f = profile_.jet(zc(0))[0];
  return {zc(0), zc(1), u(0), f * u(1)};
}

void SurfaceOfRevolution::pole_cartesian(double s_p, std::span<const double> y, Eigen::Vector2d& w,
                                         Eigen::Vector2d& wdot) const {
  const double sr = reduce_from(y[0], s_p);
  const double th = y[1];
  w = sr * e_r(th);
  double thdot = 0.0;
  if (y[3] != 0.0) {
    const double f = profile_.extended_jet(y[0])[0];
    thdot = y[3] / (f * f);
  }
  wdot = y[2] * e_r(th) + sr * thdot * e_t(th);
}

Vec SurfaceOfRevolution::frame_components(const Vec& z, std::span<const double> y) const {
  const Vec zc = fold(z);
  if (is_pole(zc)) {
    const double sp = zc(0) < 0.5 * length() ? 0.0 : length();
    Eigen::Vector2d w, wdot;
    pole_cartesian(sp, y, w, wdot);
    return wdot;
  }
  const Vec yc = fold(Eigen::Vector2d(y[0], y[1]));
  // Folding reverses the s direction when the raw s lies in (L, 2L) mod 2L.
  double r = std::fmod(y[0], 2.0 * length());
  if (r < 0.0) r += 2.0 * length();
  const double xs = r > length() ? -y[2] : y[2];
  const double fy = profile_.jet(yc(0))[0];
  const Eigen::Vector2d comp(xs, y[3] / fy);
  // Parallel transport back to z rotates the orthonormal frame by f' dtheta.
  const double ang = profile_.jet(zc(0))[1] * wrap_angle(yc(1) - zc(1));
  const double ca = std::cos(ang), sa = std::sin(ang);
  return Eigen::Vector2d(ca * comp(0) + sa * comp(1), -sa * comp(0) + ca * comp(1));
}

SqDistance SurfaceOfRevolution::sq_distance(const Vec& z, std::span<const double> y) const {
  const Vec zc = fold(z);
  const double L = length();
  if (is_pole(zc)) {
    const double sp = zc(0) < 0.5 * L ? 0.0 : L;
    const double sr = reduce_from(y[0], sp);
    return {sr * sr, 2.0 * sr * y[2]};
  }
  if (std::min(zc(0), L - zc(0)) < kCapFraction * L) {
    const double sp = zc(0) < 0.5 * L ? 0.0 : L;
    const Eigen::Vector2d wz = (zc(0) - sp) * e_r(zc(1));
    Eigen::Vector2d w, wdot;
    pole_cartesian(sp, y, w, wdot);
    const Eigen::Vector2d d = w - wz;
    return {d.squaredNorm(), 2.0 * d.dot(wdot)};
  }
  double r = std::fmod(y[0], 2.0 * L);
  if (r < 0.0) r += 2.0 * L;
  const bool flip = r > L;
  const Vec yc = fold(Eigen::Vector2d(y[0], y[1]));
  const double sdot = flip ? -y[2] : y[2];
  double thdot = 0.0;
  if (y[3] != 0.0) {
    const double f = profile_.jet(yc(0))[0];
    thdot = y[3] / (f * f);
  }
  const double fz = profile_.jet(zc(0))[0];
  const double ds = yc(0) - zc(0);
  const double dt = wrap_angle(yc(1) - zc(1));
  return {ds * ds + fz * fz * dt * dt, 2.0 * ds * sdot + 2.0 * fz * fz * dt * thdot};
}

Vec SurfaceOfRevolution::local_offset(const Vec& x, const Vec& y) const {
  const Vec xc = fold(x);
  const double L = length();
  if (is_pole(xc)) {
    const double sp = xc(0) < 0.5 * L ? 0.0 : L;
    return reduce_from(y(0), sp) * e_r(y(1));
  }
  if (std::min(xc(0), L - xc(0)) < kCapFraction * L) {
    const double sp = xc(0) < 0.5 * L ? 0.0 : L;
    const double sx = xc(0) - sp;
    const Eigen::Vector2d dw = reduce_from(y(0), sp) * e_r(y(1)) - sx * e_r(xc(1));
    const double f = profile_.jet(xc(0))[0];
    return Eigen::Vector2d(dw.dot(e_r(xc(1))), dw.dot(e_t(xc(1))) * f / sx);
  }
  const Vec yc = fold(y);
  const double f = profile_.jet(xc(0))[0];
  return Eigen::Vector2d(yc(0) - xc(0), f * wrap_angle(yc(1) - xc(1)));
}

double SurfaceOfRevolution::metric_norm(const Vec& z, const Vec& c) const {
  const Vec zc = fold(z);
  if (is_pole(zc)) return c.norm();
  const double f = profile_.jet(zc(0))[0];
  const double vs = c(0), vt = c(1) / f;
  return std::sqrt(vs * vs + f * f * vt * vt);
}

Mat SurfaceOfRevolution::representation_metric(const Vec& x) const {
  const double f = profile_.extended_jet(x(0))[0];
  Mat g = Mat::Identity(2, 2);
  g(1, 1) = f * f;
  return g;
}

Mat SurfaceOfRevolution::jacobi_curvature(std::span<const double> y) const {
  const double L = length();
  const double p = L * std::round(y[0] / L);
  Mat k(1, 1);
  if (std::abs(y[0] - p) < kPoleTaylor) {
    const auto j = profile_.extended_jet(p);
    k(0, 0) = -j[3] / j[1];
  } else {
    const auto j = profile_.extended_jet(y[0]);
    k(0, 0) = -j[2] / j[0];
  }
  return k;
}

}  // namespace qlab::geometry
