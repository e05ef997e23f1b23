#include "qlab/spectral/basis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "qlab/common/errors.hpp"

namespace qlab::spectral {

double CoefficientVector::l2_norm() const {
  double s = 0.0;
  for (const cplx& v : c) s += std::norm(v);
  return std::sqrt(s);
}

std::size_t CoefficientVector::support_end() const {
  for (std::size_t j = c.size(); j > 0; --j)
    if (c[j - 1] != cplx(0.0, 0.0)) return j;
  return 0;
}

SampleGrid SampleGrid::from_points(std::vector<Vec> pts, double spacing) {
  SampleGrid g;
  g.size = pts.size();
  g.spacing = spacing;
  auto shared = std::make_shared<std::vector<Vec>>(std::move(pts));
  g.point = [shared](std::size_t i) { return (*shared)[i]; };
  return g;
}

double SpectralBasis::density(std::size_t first, std::size_t last, const Vec& x) const {
  double s = 0.0;
  for (std::size_t j = first; j < last; ++j) s += std::norm(evaluate(j, x));
  return s;
}

cplx SpectralBasis::evaluate_sum(const CoefficientVector& f, const Vec& x) const {
  cplx s(0.0, 0.0);
  const std::size_t end = std::min(f.support_end(), size());
  for (std::size_t j = 0; j < end; ++j)
    if (f.c[j] != cplx(0.0, 0.0)) s += f.c[j] * evaluate(j, x);
  return s;
}

SupResult SpectralBasis::sup(const CoefficientVector& f, Execution exec) const {
  SupResult out;
  const std::size_t end = std::min(f.support_end(), size());
  if (end == 0) return out;
  const SampleGrid grid = sample_grid(std::max(eigenvalue(end - 1), 1.0));
  std::vector<double> best(grid.size, 0.0);
  for_each_index(grid.size, exec, [&](std::size_t i) { best[i] = std::abs(evaluate_sum(f, grid.point(i))); });
  const auto it = std::max_element(best.begin(), best.end());
  out.value = *it;
  out.argmax = grid.point(static_cast<std::size_t>(it - best.begin()));
  out.points = grid.size;
  for (const Vec& y : neighbourhood(out.argmax, 0.25 * grid.spacing, 2)) {
    const double v = std::abs(evaluate_sum(f, y));
    ++out.points;
    if (v > out.value) {
      out.value = v;
      out.argmax = y;
    }
  }
  return out;
}

SupResult zonal_sup(const SpectralBasis& basis, std::size_t j, Execution exec) {
  const auto* zonal = dynamic_cast<const ZonalBasis*>(&basis);
  if (!zonal) throw UnsupportedError("zonal_sup needs a basis with a zonal structure");
  const double L = zonal->meridian_length();
  const double lambda = std::max(basis.eigenvalue(j), 1.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(10.0 * lambda * L / (2.0 * kPi))) + 1;
  const double h = L / static_cast<double>(n - 1);
  std::vector<double> v(n);
  for_each_index(n, exec, [&](std::size_t i) { v[i] = std::abs(zonal->zonal_value(j, std::min(L, i * h))); });
  const auto it = std::max_element(v.begin(), v.end());
  SupResult out;
  double s_best = static_cast<double>(it - v.begin()) * h;
  out.value = *it;
  out.points = n;
  const double c = s_best;
  for (int k = -8; k <= 8; ++k) {
    const double s = std::clamp(c + k * 0.125 * h, 0.0, L);
    const double y = std::abs(zonal->zonal_value(j, s));
    ++out.points;
    if (y > out.value) {
      out.value = y;
      s_best = s;
    }
  }
  out.argmax = Vec::Constant(1, s_best);
  return out;
}

std::size_t SpectralBasis::lower_index(double v) const {
  return static_cast<std::size_t>(std::lower_bound(lambda_.begin(), lambda_.end(), v) - lambda_.begin());
}

std::size_t SpectralBasis::upper_index(double v) const {
  return static_cast<std::size_t>(std::upper_bound(lambda_.begin(), lambda_.end(), v) - lambda_.begin());
}

std::vector<Cluster> SpectralBasis::clusters(double tol) const {
  std::vector<Cluster> out;
  for (std::size_t j = 0; j < lambda_.size();) {
    std::size_t k = j + 1;
    while (k < lambda_.size() && lambda_[k] - lambda_[j] <= tol * std::max(1.0, lambda_[j])) ++k;
    out.push_back({j, k - j, lambda_[j]});
    j = k;
  }
  return out;
}

WindowSpec WindowSpec::sharp(double lambda, double delta) {
  if (!(delta > 0.0)) throw DomainError("sharp window needs delta > 0");
  WindowSpec w = interval(lambda, lambda + delta, true, true);
  w.kind = Kind::Sharp;
  return w;
}

WindowSpec WindowSpec::symmetric(double lambda, double delta) {
  if (!(delta > 0.0)) throw DomainError("symmetric window needs delta > 0");
  WindowSpec w = interval(lambda - delta, lambda + delta, true, true);
  w.kind = Kind::Symmetric;
  return w;
}

WindowSpec WindowSpec::low_pass(double mu) {
  WindowSpec w = interval(-kInf, mu, true, false);
  w.kind = Kind::LowPass;
  return w;
}

WindowSpec WindowSpec::high_pass(double mu) {
  WindowSpec w = interval(mu, kInf, true, true);
  w.kind = Kind::HighPass;
  return w;
}

WindowSpec WindowSpec::unit_band(double j) {
  WindowSpec w = interval(j, j + 1.0, true, false);
  w.kind = Kind::UnitBand;
  return w;
}

WindowSpec WindowSpec::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  WindowSpec w;
  w.lo = lo;
  w.hi = hi;
  w.lo_closed = lo_closed;
  w.hi_closed = hi_closed;
  return w;
}

bool WindowSpec::contains(double v) const {
  const bool above = lo_closed ? v >= lo : v > lo;
  const bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

std::pair<std::size_t, std::size_t> WindowSpec::index_range(const SpectralBasis& b) const {
  const std::size_t first = lo_closed ? b.lower_index(lo) : b.upper_index(lo);
  const std::size_t last = hi_closed ? b.upper_index(hi) : b.lower_index(hi);
  return {first, std::max(first, last)};
}

CoefficientVector apply_window(const SpectralBasis& b, const WindowSpec& w, const CoefficientVector& f) {
  CoefficientVector out(f.size());
  const std::size_t n = std::min(f.size(), b.size());
  for (std::size_t j = 0; j < n; ++j)
    if (w.contains(b.eigenvalue(j))) out.c[j] = f.c[j];
  return out;
}

CoefficientVector helmholtz(const SpectralBasis& b, const CoefficientVector& f, double lambda) {
  if (f.size() > b.size()) throw DomainError("coefficient vector longer than the basis");
  CoefficientVector out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double lj = b.eigenvalue(j);
    out.c[j] = (lambda * lambda - lj * lj) * f.c[j];
  }
  return out;
}

double helmholtz_norm(const SpectralBasis& b, const CoefficientVector& f, double lambda) {
  return helmholtz(b, f, lambda).l2_norm();
}

SupResult sup_norm(const SpectralBasis& b, const CoefficientVector& f, Execution exec) { return b.sup(f, exec); }

}  // namespace qlab::spectral
