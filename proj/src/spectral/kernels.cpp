#include "qlab/spectral/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/common/quadrature.hpp"
#include "qlab/common/smooth.hpp"
#include "qlab/spectral/torus_basis.hpp"

namespace qlab::spectral {

namespace {

double phi(double t) { return mollifier(4.0 * t); }

struct PhiNodes {
  std::vector<double> t, w;  // w includes phi(t) and the factor 2 from evenness
  PhiNodes() {
    const GaussRule& g = gauss_legendre(16);
    const int panels = 128;
    const double width = 0.25 / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = (p + 0.5) * width + 0.5 * width * g.nodes[i];
        t.push_back(x);
        w.push_back(2.0 * 0.5 * width * g.weights[i] * phi(x));
      }
  }
};

const PhiNodes& phi_nodes() {
  static const PhiNodes n;
  return n;
}

}  // namespace

double SmoothingKernel::phi_hat(double tau) const {
  const PhiNodes& n = phi_nodes();
  double s = 0.0;
  for (std::size_t i = 0; i < n.t.size(); ++i) s += n.w[i] * std::cos(tau * n.t[i]);
  return s;
}

double SmoothingKernel::phi_hat_derivative(double tau) const {
  const PhiNodes& n = phi_nodes();
  double s = 0.0;
  for (std::size_t i = 0; i < n.t.size(); ++i) s -= n.w[i] * n.t[i] * std::sin(tau * n.t[i]);
  return s;
}

SmoothingKernel::SmoothingKernel() {
  norm_ = phi_hat(0.0);
  // rho_hat^2 = (phi_hat / phi_hat(0))^4 < 1e-12 once |phi_hat / phi_hat(0)| < 1e-3.
  // Scan until the ratio has stayed below that level over a stretch of 50.
  double last_above = 0.0;
  for (double tau = 0.0; tau < 4000.0; tau += 0.5) {
    if (std::abs(phi_hat(tau) / norm_) >= 1e-3) last_above = tau;
    if (tau - last_above > 50.0) break;
  }
  tau_cut_ = std::ceil(last_above + 1.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(tau_cut_ / step_)) + 1;
  value_.resize(n);
  slope_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    value_[i] = phi_hat(i * step_) / norm_;
    slope_[i] = phi_hat_derivative(i * step_) / norm_;
  }
}

const SmoothingKernel& SmoothingKernel::standard() {
  static const SmoothingKernel k;
  return k;
}

double SmoothingKernel::rho_hat(double tau) const {
  tau = std::abs(tau);
  if (tau >= tau_cut_) return 0.0;
  std::size_t i = static_cast<std::size_t>(tau / step_);
  if (i + 1 >= value_.size()) i = value_.size() - 2;
  const double s = tau / step_ - double(i), h = step_;
  const double s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * value_[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
                   (-2 * s3 + 3 * s2) * value_[i + 1] + (s3 - s2) * h * slope_[i + 1];
  return v * v;
}

double SmoothingKernel::rho(double t) const {
  t = std::abs(t);
  if (t >= 0.5) return 0.0;
  const double lo = std::max(-0.25, t - 0.25), hi = std::min(0.25, t + 0.25);
  const double conv = integrate_panels([t](double s) { return phi(s) * phi(s - t); }, lo, hi, 16, 16);
  return conv / (norm_ * norm_);
}

DirectionCutoff::DirectionCutoff(Vec center, double inner, double outer)
    : center_(std::move(center)), inner_(inner), outer_(outer) {
  if (center_.size() < 2) throw DomainError("direction cutoff needs n >= 2");
  if (!(center_.norm() > 0.0)) throw DomainError("direction cutoff centre must be nonzero");
  center_.normalize();
  if (!(inner >= 0.0 && outer > inner && outer <= kPi)) throw DomainError("direction cutoff radii out of order");
}

DirectionCutoff DirectionCutoff::with_measure(const Vec& center, double measure) {
  if (!(measure > 0.0)) throw DomainError("cap measure must be positive");
  const int n = static_cast<int>(center.size());
  if (n == 2) {
    // Plateau 2r, ramp r: measure = 2 (0.4 m + 0.2 m / 2) = m by the symmetry
    // of the smooth step.
    if (0.6 * measure > kPi) throw DomainError("cap measure too large");
    return DirectionCutoff(center, 0.4 * measure, 0.6 * measure);
  }
  double lo = 0.0, hi = kPi / 0.6 * 0.999;
  if (DirectionCutoff(center, 0.4 * hi, 0.6 * hi).measure() < measure) throw DomainError("cap measure too large");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (DirectionCutoff(center, 0.4 * mid, 0.6 * mid).measure() < measure ? lo : hi) = mid;
  }
  return DirectionCutoff(center, 0.4 * hi, 0.6 * hi);
}

double DirectionCutoff::value(const Vec& xi) const {
  if (xi.size() != center_.size()) throw DomainError("direction dimension mismatch");
  const double c = xi.dot(center_);
  const double s = (xi - c * center_).norm();
  return plateau_cutoff(std::atan2(s, c), inner_, outer_);
}

double DirectionCutoff::measure() const {
  const int n = dim();
  const double sphere = unit_sphere_area(n - 1);
  auto integrand = [&](double a) { return plateau_cutoff(a, inner_, outer_) * std::pow(std::sin(a), n - 2); };
  return sphere * integrate_panels(integrand, 0.0, outer_, 256, 16);
}

double smoothed_sum(const SpectralBasis& basis, double T, double lambda, const Vec& x, const DirectionCutoff* cutoff,
                    SmoothedSumOptions opts) {
  if (!(T > 0.0)) throw DomainError("smoothing time must be positive");
  const SmoothingKernel& k = SmoothingKernel::standard();
  const double reach = k.tau_cut() / T;
  const std::size_t first = basis.lower_index(lambda - reach), last = basis.upper_index(lambda + reach);
  double s = 0.0;
  if (cutoff) {
    const auto* torus = dynamic_cast<const TorusBasis*>(&basis);
    if (!torus) throw UnsupportedError("direction cutoffs act only on torus bases");
    if (cutoff->dim() != torus->dim()) throw DomainError("cutoff dimension does not match the torus");
    for (std::size_t j = first; j < last; ++j) {
      const double w = k.weight(T, lambda, basis.eigenvalue(j));
      if (w < opts.weight_floor) continue;
      const Vec kv = torus->wavevector(j);
      const double b = kv.norm() > 0.0 ? cutoff->value(kv) : 0.0;
      s += w * b * b / torus->volume();
    }
    return s;
  }
  for (std::size_t j = first; j < last;) {
    std::size_t end = j + 1;
    while (end < last && basis.eigenvalue(end) == basis.eigenvalue(j)) ++end;
    const double w = k.weight(T, lambda, basis.eigenvalue(j));
    if (w >= opts.weight_floor) s += w * basis.density(j, end, x);
    j = end;
  }
  return s;
}

}  // namespace qlab::spectral
