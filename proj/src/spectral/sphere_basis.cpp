#include "qlab/spectral/sphere_basis.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/common/quadrature.hpp"

namespace qlab::spectral {

namespace {

// Single normalized Legendre value p_lm(t) by upward recurrence in l.
double legendre_single(int l, int m, double t) {
  const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * st;
  if (l == m) return pmm;
  double p1 = t * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return p1;
  double p0 = pmm;
  for (int k = m + 2; k <= l; ++k) {
    const double kk = k, mm = m;
    const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - mm * mm));
    const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - mm * mm) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
    const double p2 = a * (t * p1 - b * p0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void angles(const Vec& x, double& t, double& phi) {
  if (x.size() != 3) throw DomainError("sphere basis expects a point in R^3");
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("sphere basis: zero vector");
  t = std::clamp(x(2) / r, -1.0, 1.0);
  phi = std::atan2(x(1), x(0));
}

}  // namespace

SphereBasis::SphereBasis(int l_max) : l_max_(l_max) {
  if (l_max < 0 || l_max > 400) throw DomainError("sphere basis needs 0 <= l_max <= 400");
  lambda_.reserve(static_cast<std::size_t>((l_max + 1) * (l_max + 1)));
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) lambda_.push_back(std::sqrt(double(l) * (l + 1)));
}

int SphereBasis::degree(std::size_t j) { return static_cast<int>(std::floor(std::sqrt(double(j)) + 1e-12)); }

std::string SphereBasis::provenance() const { return "sphere(n=2,l_max=" + std::to_string(l_max_) + ")"; }

std::vector<std::vector<double>> SphereBasis::legendre_table(int lmax, double t) {
  std::vector<std::vector<double>> p(lmax + 1);
  for (int l = 0; l <= lmax; ++l) p[l].assign(l + 1, 0.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
    p[m][m] = pmm;
    if (m + 1 <= lmax) p[m + 1][m] = t * std::sqrt(2.0 * m + 3.0) * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = l, mm = m;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      p[l][m] = a * (t * p[l - 1][m] - b * p[l - 2][m]);
    }
  }
  return p;
}

cplx SphereBasis::evaluate(std::size_t j, const Vec& x) const {
  if (j >= size()) throw DomainError("sphere basis index out of range");
  const int l = degree(j);
  const int m = static_cast<int>(j) - l * l - l;
  double t, phi;
  angles(x, t, phi);
  const double p = legendre_single(l, std::abs(m), t);
  if (m == 0) return p;
  if (m > 0) return std::sqrt(2.0) * p * std::cos(m * phi);
  return std::sqrt(2.0) * p * std::sin(-m * phi);
}

double SphereBasis::density(std::size_t first, std::size_t last, const Vec& x) const {
  last = std::min(last, size());
  double s = 0.0;
  std::size_t j = first;
  while (j < last) {
    const int l = degree(j);
    const std::size_t c0 = index(l, -l), c1 = index(l, l) + 1;
    if (j == c0 && c1 <= last) {
      s += (2.0 * l + 1.0) / (4.0 * kPi);
      j = c1;
    } else {
      s += std::norm(evaluate(j, x));
      ++j;
    }
  }
  return s;
}

cplx SphereBasis::evaluate_sum(const CoefficientVector& f, const Vec& x) const {
  const std::size_t end = std::min(f.support_end(), size());
  if (end == 0) return 0.0;
  const int lmax = degree(end - 1);
  double t, phi;
  angles(x, t, phi);
  const auto p = legendre_table(lmax, t);
  std::vector<double> cm(lmax + 1), sm(lmax + 1);
  for (int m = 0; m <= lmax; ++m) {
    cm[m] = std::cos(m * phi);
    sm[m] = std::sin(m * phi);
  }
  cplx s(0.0, 0.0);
  for (std::size_t j = 0; j < end; ++j) {
    if (f.c[j] == cplx(0.0, 0.0)) continue;
    const int l = degree(j);
    const int m = static_cast<int>(j) - l * l - l;
    double v = p[l][std::abs(m)];
    if (m > 0) v *= std::sqrt(2.0) * cm[m];
    if (m < 0) v *= std::sqrt(2.0) * sm[-m];
    s += f.c[j] * v;
  }
  return s;
}

SampleGrid SphereBasis::sample_grid(double lambda) const {
  // Polar angle on [0, pi] with 5 lambda intervals, azimuth with 10 lambda:
  // both give >= 10 points per wavelength 2 pi / lambda.
  const std::size_t nt = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(5.0 * lambda)));
  const std::size_t np = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(10.0 * lambda)));
  SampleGrid g;
  g.size = (nt + 1) * np;
  g.spacing = kPi / double(nt);
  g.point = [nt, np](std::size_t i) {
    const double th = kPi * double(i / np) / double(nt);
    const double ph = 2.0 * kPi * double(i % np) / double(np);
    Vec x(3);
    x << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
    return x;
  };
  return g;
}

std::vector<Vec> SphereBasis::neighbourhood(const Vec& x, double h, int radius) const {
  const Eigen::Vector3d u = x.normalized();
  Eigen::Vector3d a = std::abs(u(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (a - a.dot(u) * u).normalized();
  const Eigen::Vector3d e2 = u.cross(e1);
  std::vector<Vec> out;
  for (int i = -radius; i <= radius; ++i)
    for (int k = -radius; k <= radius; ++k) out.push_back((u + h * (i * e1 + k * e2)).normalized());
  return out;
}

std::vector<std::size_t> SphereBasis::zonal_indices() const {
  std::vector<std::size_t> out;
  for (int l = 0; l <= l_max_; ++l) out.push_back(index(l, 0));
  return out;
}

double SphereBasis::zonal_value(std::size_t j, double s) const {
  const int l = degree(j);
  if (index(l, 0) != j) throw DomainError("not a zonal index");
  return legendre_single(l, 0, std::cos(s));
}

double SphereBasis::profile(double s) const { return std::sin(s); }

}  // namespace qlab::spectral

namespace qlab::spectral {

namespace {

// Gauss-Legendre nodes in s on [0, pi], at least 10 per wavelength at l_max.
std::vector<std::pair<double, double>> meridian_rule(int l_max) {
  const GaussRule& g = gauss_legendre(16);
  const double wavelength = 2.0 * kPi / std::max(1.0, l_max + 0.5);
  const int panels = std::max(8, static_cast<int>(std::ceil(kPi / wavelength * 10.0 / 16.0)) + 1);
  const double w = kPi / panels;
  std::vector<std::pair<double, double>> out;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      out.emplace_back((p + 0.5) * w + 0.5 * w * g.nodes[i], 0.5 * w * g.weights[i]);
  return out;
}

}  // namespace

std::vector<double> SphereBasis::zonal_coefficients(const std::function<double(double)>& u) const {
  std::vector<double> c(l_max_ + 1, 0.0);
  std::vector<double> p(l_max_ + 1);
  for (const auto& [s, w] : meridian_rule(l_max_)) {
    const double t = std::cos(s), us = u(s) * 2.0 * kPi * std::sin(s) * w;
    p[0] = 1.0 / std::sqrt(4.0 * kPi);
    if (l_max_ >= 1) p[1] = t * std::sqrt(3.0) * p[0];
    for (int l = 2; l <= l_max_; ++l) {
      const double ll = l;
      p[l] = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll)) *
             (t * p[l - 1] - std::sqrt((ll - 1.0) * (ll - 1.0) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0)) * p[l - 2]);
    }
    for (int l = 0; l <= l_max_; ++l) c[l] += us * p[l];
  }
  return c;
}

double SphereBasis::zonal_mass(const std::function<double(double)>& u) const {
  double m = 0.0;
  for (const auto& [s, w] : meridian_rule(l_max_)) {
    const double v = u(s);
    m += 2.0 * kPi * std::sin(s) * w * v * v;
  }
  return m;
}

}  // namespace qlab::spectral
