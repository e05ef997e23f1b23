#include "qlab/quasimode/quasimode.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/common/smooth.hpp"
#include "qlab/dynamics/classify.hpp"
#include "qlab/flow/jacobi.hpp"
#include "qlab/geometry/maps.hpp"

namespace qlab::quasimode {

double frequency(double T, int beta, int k) {
  if (!(T > 0.0)) throw DomainError("return time must be positive");
  if (beta < 0) throw DomainError("Morse index must be nonnegative");
  return 2.0 * kPi / T * (k + beta / 4.0);
}

std::vector<double> frequencies(double T, int beta, int k_min, int k_max) {
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(frequency(T, beta, k));
  return out;
}

QuasimodeSpec QuasimodeSpec::make(int n, double T, int beta, int k) {
  QuasimodeSpec s;
  s.n = n;
  s.T = T;
  s.beta = beta;
  s.k = k;
  s.delta_ann = 1.0 - 1.0 / (2.0 * n);
  return s;
}

void QuasimodeSpec::validate() const {
  if (n != 2 && n != 3) throw DomainError("quasimodes are implemented for n = 2, 3");
  if (!(r() > 0.0)) throw DomainError("r_k must be positive");
  if (!(R > 1.0)) throw DomainError("cutoff radius R must exceed 1");
  if (!(delta_ann > 1.0 - 1.0 / n && delta_ann < 1.0)) throw DomainError("delta_ann must lie in (1 - 1/n, 1)");
  if (!(eps0 > 0.0)) throw DomainError("eps0 must be positive");
  if (!(nodes_per_oscillation >= 10.0)) throw DomainError("need at least 10 nodes per oscillation");
}

double phase_eval(const Vec& x_nc, const Vec& theta) {
  const double t = theta.norm();
  if (!(t > 0.0)) throw DomainError("phase undefined at theta = 0");
  if (x_nc.size() != theta.size()) throw DomainError("phase: dimension mismatch");
  return x_nc.dot(theta) / t;
}

double gauss_phase(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta) {
  const double t = theta.norm();
  if (!(t > 0.0)) throw DomainError("phase undefined at theta = 0");
  const Mat g = geometry::normal_coordinate_metric(m, z, x_nc);
  return x_nc.dot(g * theta) / t;  // g(0) is the identity in normal coordinates
}

double eikonal_residual(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta) {
  const double t = theta.norm();
  if (!(t > 0.0)) throw DomainError("phase undefined at theta = 0");
  const Vec grad = theta / t;
  const Mat g = geometry::normal_coordinate_metric(m, z, x_nc);
  return grad.dot(g.ldlt().solve(grad)) - 1.0;
}

double transport_residual(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta) {
  const int n = static_cast<int>(x_nc.size());
  const Mat ginv = geometry::normal_coordinate_metric(m, z, x_nc).inverse();
  const double h = 1e-3;
  auto phi = [&](const Vec& x) { return x.dot(theta); };
  auto a0 = [](const Vec&) { return 1.0; };
  Vec grad_phi(n), grad_a(n);
  Mat hess(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    grad_phi(i) = (phi(x_nc + e) - phi(x_nc - e)) / (2 * h);
    grad_a(i) = (a0(x_nc + e) - a0(x_nc - e)) / (2 * h);
    for (int j = 0; j < n; ++j) {
      Vec f = Vec::Zero(n);
      f(j) = h;
      hess(i, j) = (phi(x_nc + e + f) - phi(x_nc + e - f) - phi(x_nc - e + f) + phi(x_nc - e - f)) / (4 * h * h);
    }
  }
  const double first = std::abs(grad_phi.dot(ginv * grad_a));
  const double second = std::abs((ginv.cwiseProduct(hess)).sum() * a0(x_nc));
  return std::max(first, second);
}

double angular_integral(int n, double s) {
  if (n == 2) return 2.0 * kPi * std::cyl_bessel_j(0.0, std::abs(s));
  if (n == 3) return std::abs(s) < 1e-8 ? 4.0 * kPi * (1.0 - s * s / 6.0) : 4.0 * kPi * std::sin(s) / s;
  throw DomainError("angular integral implemented for n = 2, 3");
}

QuadratureResult<cplx> angular_integral_quadrature(int n, double s) {
  // Each panel covers at most a tenth of an oscillation of e^{i s cos a}.
  const double width = std::min(kPi / 8.0, 2.0 * kPi / std::max(std::abs(s), 1.0) / 10.0);
  if (n == 2)
    return integrate_with_estimate([s](double a) { return std::exp(cplx(0.0, s * std::cos(a))); }, 0.0, 2.0 * kPi,
                                   width);
  if (n == 3) {
    auto r = integrate_with_estimate(
        [s](double a) { return std::exp(cplx(0.0, s * std::cos(a))) * std::sin(a); }, 0.0, kPi, width);
    r.value *= 2.0 * kPi;
    r.error *= 2.0 * kPi;
    return r;
  }
  throw DomainError("angular integral implemented for n = 2, 3");
}

QuadratureResult<double> radial_mass(int n, double R) {
  if (!(R > 1.0)) throw DomainError("cutoff radius R must exceed 1");
  return integrate_with_estimate([n, R](double r) { return plateau_cutoff(r, R, 2.0 * R) * std::pow(r, n - 1); }, 0.0,
                                 2.0 * R, R / 16.0);
}

namespace {

double prefactor(const QuasimodeSpec& s) { return std::pow(2.0 * kPi * s.hbar(), 0.5 * (1 - s.n)); }

const QuadratureResult<double>& cached_mass(int n, double R) {
  thread_local int last_n = -1;
  thread_local double last_R = -1.0;
  thread_local QuadratureResult<double> last;
  if (n != last_n || R != last_R) {
    last = radial_mass(n, R);
    last_n = n;
    last_R = R;
  }
  return last;
}

// Closed-form local quasimode as a function of rho = |x_nc|.
double closed_form(const QuasimodeSpec& s, double rho) {
  return prefactor(s) * cached_mass(s.n, s.R).value * angular_integral(s.n, rho / s.hbar());
}

}  // namespace

QuasimodeValue quasimode_eval(const QuasimodeSpec& spec, const Vec& x_nc) {
  spec.validate();
  if (x_nc.size() != spec.n) throw DomainError("quasimode_eval: dimension mismatch");
  const double rho = x_nc.norm();
  if (rho > spec.eps0 * (1.0 + 1e-12)) throw DomainError("point outside the normal ball B_1");
  const auto& mass = cached_mass(spec.n, spec.R);
  const auto ang = angular_integral_quadrature(spec.n, rho / spec.hbar());
  const double pre = prefactor(spec);
  QuasimodeValue out;
  out.value = pre * mass.value * ang.value;
  out.error = pre * (mass.error * std::abs(ang.value) + mass.value * ang.error);
  const double scale = pre * mass.value * unit_sphere_area(spec.n);
  if (out.error > spec.tol * scale)
    throw NumericalError("quasimode quadrature error " + std::to_string(out.error) + " above tolerance");
  return out;
}

QuasimodeValue quasimode_eval_at(const QuasimodeSpec& spec, const Vec& point) {
  if (!spec.model) throw PreconditionError("quasimode spec has no model");
  return quasimode_eval(spec, geometry::normal_coordinates(*spec.model, spec.z, point));
}

std::pair<cplx, cplx> stationary_phase_constants(const QuasimodeSpec& spec) {
  spec.validate();
  const double m = cached_mass(spec.n, spec.R).value;
  const double a = (spec.n - 1) * kPi / 4.0;
  return {std::polar(m, -a), std::polar(m, a)};
}

cplx stationary_phase_approx(const QuasimodeSpec& spec, const Vec& x_nc) {
  const double rho = x_nc.norm();
  if (rho < std::pow(spec.hbar(), spec.delta_ann)) throw DomainError("point inside the excluded ball |x| < h^delta");
  const auto [cp, cm] = stationary_phase_constants(spec);
  const double s = rho / spec.hbar();
  return std::pow(rho, 0.5 * (1 - spec.n)) * (cp * std::exp(cplx(0.0, s)) + cm * std::exp(cplx(0.0, -s)));
}

double stationary_phase_envelope(const QuasimodeSpec& spec, double rho, int samples) {
  const double h = spec.hbar();
  Vec dir = Vec::Zero(spec.n);
  dir(0) = 1.0;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double p = rho + kPi * h * (2.0 * i / samples - 1.0);
    const Vec x = p * dir;
    worst = std::max(worst, std::abs(quasimode_eval(spec, x).value - stationary_phase_approx(spec, x)));
  }
  return worst;
}

L2Normalization l2_normalize(const QuasimodeSpec& spec) {
  spec.validate();
  const double h = spec.hbar();
  const double split = std::min(std::pow(h, spec.delta_ann), spec.eps0);
  const double sphere = unit_sphere_area(spec.n);
  auto density = [&](double rho) {
    const double v = closed_form(spec, rho);
    return sphere * v * v * std::pow(rho, spec.n - 1);
  };
  // |Phi|^2 oscillates with period pi h; panels resolve e^{i rho / h}.
  const double width = 2.0 * kPi * h / spec.nodes_per_oscillation;
  const auto ball = integrate_with_estimate(density, 0.0, split, width);
  const auto ann = integrate_with_estimate(density, split, spec.eps0, width);
  L2Normalization out;
  out.ball = ball.value;
  out.annulus = ann.value;
  out.total = ball.value + ann.value;
  out.error = ball.error + ann.error;
  const auto [cp, cm] = stationary_phase_constants(spec);
  out.leading = sphere * (std::norm(cp) + std::norm(cm)) * (spec.eps0 - split);
  if (out.error > spec.tol * out.total) throw NumericalError("L2 normalization quadrature did not converge");
  const double scale = 1.0 / std::sqrt(out.total);
  const QuasimodeSpec copy = spec;
  out.evaluate = [copy, scale](const Vec& x) { return cplx(scale * closed_form(copy, x.norm()), 0.0); };
  return out;
}

GrowthFit growth_fit(int n, double T, int beta, int k_min, int k_max, const GrowthOptions& opts) {
  if (k_max < k_min) throw DomainError("empty k range");
  GrowthFit g;
  g.T = T;
  g.beta = beta;
  for (int k = k_min; k <= k_max; k += std::max(1, opts.stride)) {
    QuasimodeSpec s = QuasimodeSpec::make(n, T, beta, k);
    s.R = opts.R;
    s.eps0 = opts.eps0;
    if (!(s.r() > 0.0)) continue;
    const L2Normalization norm = l2_normalize(s);
    const double at_z = std::abs(quasimode_eval(s, Vec::Zero(n)).value) / std::sqrt(norm.total);
    g.k.push_back(k);
    g.r.push_back(s.r());
    g.value.push_back(at_z);
    g.norm.push_back(norm.total);
  }
  g.fit = fit_power_law(g.r, g.value, 5);
  return g;
}

GrowthFit sup_growth(const geometry::Manifold& model, const Vec& z, int k_min, int k_max, const GrowthOptions& opts) {
  if (k_max - k_min + 1 < 5) throw PreconditionError("growth fit needs at least 5 modes");
  const dynamics::PointClassification c = dynamics::classify_point(model, z, opts.sweep);
  if (c.cls != dynamics::PointClass::BlowDown || !c.identity_map)
    throw PreconditionError(std::string("growth needs a blow-down point with identity return map; got ") +
                            dynamics::to_string(c.cls) + (c.identity_map ? "" : " without identity map"));
  const int beta = flow::morse_index_of_blowdown(model, z, c.mean_return_time);
  return growth_fit(model.dim(), c.mean_return_time, beta, k_min, k_max, opts);
}

ResidualResult residual_norm(const QuasimodeSpec& spec, const spectral::SpectralBasis& basis, ResidualMode mode) {
  spec.validate();
  const auto* zonal = dynamic_cast<const spectral::ZonalBasis*>(&basis);
  if (!zonal) throw UnsupportedError("residual needs a sphere or surface-of-revolution eigenbasis");
  if (spec.n != 2) throw UnsupportedError("zonal residual is two dimensional");
  const double L = zonal->meridian_length(), r = spec.r();
  const double sign = spec.k % 2 == 0 ? 1.0 : -1.0;
  // (d / f(s))^{1/2} with d the distance to the pole the piece is built at.
  auto half_density = [&](double d, double s) { return d < 1e-8 ? 1.0 : std::sqrt(d / zonal->profile(s)); };
  std::function<double(double)> u;
  if (mode == ResidualMode::Patched) {
    u = [&](double s) {
      const double north = 1.0 - smooth_step((s - 0.3 * L) / (0.4 * L));
      double v = 0.0;
      if (north > 0.0) v += north * half_density(s, s) * std::cyl_bessel_j(0.0, r * s);
      if (north < 1.0) v += sign * (1.0 - north) * half_density(L - s, s) * std::cyl_bessel_j(0.0, r * (L - s));
      return v;
    };
  } else {
    u = [&](double s) { return plateau_cutoff(s, 0.5 * spec.eps0, spec.eps0) * std::cyl_bessel_j(0.0, r * s); };
  }
  const std::vector<std::size_t> idx = zonal->zonal_indices();
  const std::vector<double> c = zonal->zonal_coefficients(u);
  const double mass = zonal->zonal_mass(u);
  ResidualResult out;
  double sum = 0.0, captured = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double l = basis.eigenvalue(idx[i]);
    sum += std::pow((l * l - r * r) * c[i], 2);
    captured += c[i] * c[i];
  }
  out.residual = std::sqrt(sum / mass);
  out.captured = captured / mass;
  out.terms = idx.size();
  return out;
}

}  // namespace qlab::quasimode
