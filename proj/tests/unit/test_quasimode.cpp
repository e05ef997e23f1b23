#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qlab/common/errors.hpp"
#include "qlab/flow/jacobi.hpp"
#include "qlab/geometry/maps.hpp"
#include "qlab/geometry/models.hpp"
#include "qlab/quasimode/quasimode.hpp"
#include "qlab/spectral/sor_basis.hpp"
#include "qlab/spectral/sphere_basis.hpp"
#include "qlab/spectral/torus_basis.hpp"

using namespace qlab;
using namespace qlab::quasimode;

namespace {

QuasimodeSpec sphere_spec(int k) { return QuasimodeSpec::make(2, 2.0 * kPi, 2, k); }

Vec unit(double a) { return Eigen::Vector2d(std::cos(a), std::sin(a)); }

}  // namespace

TEST(Frequencies, ClosedFormsAndSphereSpectrum) {
  EXPECT_EQ(frequency(2.0 * kPi, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(frequency(2.0 * kPi, 2, 5), 5.5);
  geometry::RoundSphere s(2);
  const int beta = flow::morse_index_of_blowdown(s, s.north_pole(), 2.0 * kPi);
  ASSERT_EQ(beta, 2);
  for (int k = 10; k <= 100; ++k)
    EXPECT_LE(std::abs(frequency(2.0 * kPi, beta, k) - std::sqrt(k * (k + 1.0))), 1.0 / (8.0 * k) + 1e-3);
  EXPECT_EQ(frequencies(1.0, 0, 3, 7).size(), 5u);
  EXPECT_THROW(frequency(0.0, 0, 1), DomainError);
}

TEST(Phase, BasicIdentitiesAndHomogeneity) {
  const Vec th = Eigen::Vector2d(0.3, -1.2);
  EXPECT_EQ(phase_eval(Vec::Zero(2), th), 0.0);
  EXPECT_NEAR(phase_eval(0.37 * th / th.norm(), th), 0.37, 1e-15);
  const Vec x = Eigen::Vector2d(0.1, 0.05);
  for (double c : {0.01, 3.0, 1e5}) EXPECT_NEAR(phase_eval(x, c * th), phase_eval(x, th), 1e-16);
  EXPECT_THROW(phase_eval(x, Vec::Zero(2)), DomainError);
}

TEST(Phase, EikonalGaussAndTransportOnModels) {
  geometry::RoundSphere s(2);
  geometry::TriaxialEllipsoid e(1.0, 0.8, 0.6);
  const auto torus = geometry::FlatTorus::square(2);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), rad(0.05, 0.4);
  for (int i = 0; i < 6; ++i) {
    const Vec dir = unit(ang(rng)), x = rad(rng) * unit(ang(rng));
    // On the critical set theta || x the phase solves the eikonal equation
    // on any model; on the flat torus it does so for every theta.
    EXPECT_LT(std::abs(eikonal_residual(s, s.north_pole(), x, x * 3.0)), 1e-8);
    EXPECT_LT(std::abs(eikonal_residual(e, geometry::resolve_point(e, "umbilic"), x, x)), 1e-8);
    EXPECT_LT(std::abs(eikonal_residual(torus, Vec::Zero(2), x, dir)), 1e-8);
    EXPECT_NEAR(gauss_phase(s, s.north_pole(), x, dir), phase_eval(x, dir), 1e-8);
    EXPECT_NEAR(gauss_phase(e, geometry::resolve_point(e, "umbilic"), x, dir), phase_eval(x, dir), 1e-8);
    EXPECT_LT(transport_residual(s, s.north_pole(), x, dir), 1e-8);
    EXPECT_LT(transport_residual(e, geometry::resolve_point(e, "generic"), x, dir), 1e-8);
  }
  // Off the critical set the curved metric is visible.
  EXPECT_GT(std::abs(eikonal_residual(s, s.north_pole(), Eigen::Vector2d(0.4, 0.0), unit(1.0))), 1e-3);
}

TEST(AngularIntegral, ClosedFormsAndQuadratureOracle) {
  EXPECT_NEAR(angular_integral(2, 0.0), 2.0 * kPi, 1e-15);
  EXPECT_NEAR(angular_integral(3, 0.0), 4.0 * kPi, 1e-15);
  // Trapezoid rule is spectrally accurate for the periodic integrand.
  const int N = 400;
  cplx trap(0.0, 0.0);
  for (int i = 0; i < N; ++i) trap += std::exp(cplx(0.0, 10.0 * std::cos(2.0 * kPi * i / N)));
  trap *= 2.0 * kPi / N;
  EXPECT_NEAR(angular_integral(2, 10.0), trap.real(), 1e-10);
  EXPECT_NEAR(trap.imag(), 0.0, 1e-10);
  for (int n : {2, 3})
    for (double s : {0.0, 0.5, 7.0, 85.0}) {
      const auto q = angular_integral_quadrature(n, s);
      EXPECT_NEAR(q.value.real(), angular_integral(n, s), 1e-11) << n << " " << s;
      EXPECT_NEAR(q.value.imag(), 0.0, 1e-11);
      EXPECT_LT(q.error, 1e-11);
    }
}

TEST(Quasimode, ValueAtTheBlowDownPoint) {
  for (int n : {2, 3}) {
    QuasimodeSpec s = QuasimodeSpec::make(n, 2.0 * kPi, 2 * (n - 1), 30);
    const auto v = quasimode_eval(s, Vec::Zero(n));
    const double expect = std::pow(2.0 * kPi * s.hbar(), 0.5 * (1 - n)) * radial_mass(n, s.R).value *
                          unit_sphere_area(n);
    EXPECT_NEAR(v.value.real(), expect, 1e-12 * expect);
    EXPECT_EQ(v.value.imag(), 0.0);
    EXPECT_GT(v.value.real(), 0.0);
  }
  // Unnormalized growth: |Phi_k(z)| / r_k^{1/2} is constant.
  const double ref = std::abs(quasimode_eval(sphere_spec(20), Vec::Zero(2)).value) / std::sqrt(sphere_spec(20).r());
  for (int k = 20; k <= 200; k += 30)
    EXPECT_NEAR(std::abs(quasimode_eval(sphere_spec(k), Vec::Zero(2)).value) / std::sqrt(sphere_spec(k).r()) / ref, 1.0,
                0.01);
}

TEST(Quasimode, RadialityAndEvaluationAtManifoldPoints) {
  QuasimodeSpec s = sphere_spec(40);
  const cplx a = quasimode_eval(s, 0.23 * unit(0.4)).value;
  EXPECT_NEAR(std::abs(quasimode_eval(s, -0.23 * unit(0.4)).value - a), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(quasimode_eval(s, 0.23 * unit(2.9)).value - a), 0.0, 1e-12);
  auto sphere = std::make_shared<geometry::RoundSphere>(2);
  s.model = sphere;
  s.z = sphere->north_pole();
  const Vec p = geometry::exp_map(*sphere, geometry::TangentVector(s.z, 0.23 * unit(1.1)));
  EXPECT_NEAR(std::abs(quasimode_eval_at(s, p).value - a), 0.0, 1e-9);
  EXPECT_THROW(quasimode_eval(s, Eigen::Vector2d(0.6, 0.0)), DomainError);
}

TEST(StationaryPhase, ConstantsAndAnnulusAgreement) {
  const QuasimodeSpec s = sphere_spec(60);
  const auto [cp, cm] = stationary_phase_constants(s);
  EXPECT_NEAR(std::abs(cp), std::abs(cm), 1e-15);
  EXPECT_GT(std::abs(cp), 0.0);
  // |x| = h^{0.6}: discrepancy within |x|^{-1/2} C h / |x| with one constant.
  std::vector<double> c;
  for (int k : {120, 240, 480, 960}) {
    const QuasimodeSpec q = sphere_spec(k);
    const double rho = std::pow(q.hbar(), 0.6);
    double worst = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double p = rho + kPi * q.hbar() * (i / 32.0 - 1.0);
      const Vec x = p * unit(0.7);
      const double d = std::abs(quasimode_eval(q, x).value - stationary_phase_approx(q, x));
      worst = std::max(worst, d / (std::pow(p, -0.5) * q.hbar() / p));
    }
    c.push_back(worst);
  }
  for (double v : c) EXPECT_NEAR(v / c[0], 1.0, 0.1);
  EXPECT_THROW(stationary_phase_approx(s, Eigen::Vector2d(1e-4, 0.0)), DomainError);
}

TEST(StationaryPhase, DiscrepancyHalvesWithH) {
  for (double rho : {0.1, 0.2}) {
    double prev = 0.0;
    for (int j = 0; j < 4; ++j) {
      const int k = 100 << j;
      const QuasimodeSpec q = sphere_spec(k);
      const double d = stationary_phase_envelope(q, rho);
      if (prev > 0.0) {
        EXPECT_NEAR(prev / d, 2.0, 0.3) << rho << " " << k;
      }
      prev = d;
    }
  }
}

TEST(L2Normalize, ConvergenceBallShareAndLeadingMass) {
  for (int k : {50, 100, 200, 400}) {
    const QuasimodeSpec q = sphere_spec(k);
    const L2Normalization a = l2_normalize(q), b = l2_normalize(sphere_spec(2 * k));
    const double dprime = std::min(1.0 - (1.0 - q.delta_ann) * 2.0, q.delta_ann);
    EXPECT_LE(std::abs(a.total - b.total), 10.0 * std::pow(q.hbar(), dprime) * a.total);
    EXPECT_LE(a.ball / a.total, std::pow(q.hbar(), 1.0 - (1.0 - q.delta_ann) * 2.0 - 0.05));
    EXPECT_LE(std::abs(a.annulus - a.leading), 10.0 * std::pow(q.hbar(), q.delta_ann) * a.total);
    EXPECT_NEAR(std::norm(a.evaluate(Vec::Zero(2))) * a.total, std::norm(quasimode_eval(q, Vec::Zero(2)).value),
                1e-9 * a.total * std::norm(a.evaluate(Vec::Zero(2))));
  }
}

TEST(Growth, SphereAndSorPolesGiveHalfExponent) {
  geometry::RoundSphere s(2);
  GrowthOptions o;
  o.sweep.grid_size = 16;
  o.stride = 20;
  const GrowthFit g = sup_growth(s, s.north_pole(), 20, 200, o);
  EXPECT_EQ(g.beta, 2);
  EXPECT_NEAR(g.T, 2.0 * kPi, 1e-6);
  EXPECT_NEAR(g.fit.exponent, 0.5, 0.02);
  geometry::SurfaceOfRevolution r(geometry::Profile::sine());
  const GrowthFit h = sup_growth(r, r.north_pole(), 20, 200, o);
  EXPECT_NEAR(h.fit.exponent, 0.5, 0.02);
  EXPECT_NEAR(h.fit.exponent, g.fit.exponent, 1e-6);
  EXPECT_THROW(sup_growth(s, s.north_pole(), 20, 23, o), PreconditionError);
}

TEST(Growth, RequiresIdentityReturnMap) {
  geometry::TriaxialEllipsoid e(1.0, 0.8, 0.6);
  GrowthOptions o;
  o.sweep.grid_size = 16;
  EXPECT_THROW(sup_growth(e, geometry::resolve_point(e, "umbilic"), 10, 20, o), PreconditionError);
}

TEST(Residual, BoundedOnTheSphereAndSensitiveToBeta) {
  std::vector<double> r, res, wrong;
  for (int k = 10; k <= 100; k += 15) {
    const spectral::SphereBasis b(k + 40);
    const auto out = residual_norm(sphere_spec(k), b);
    EXPECT_NEAR(out.captured, 1.0, 1e-8);
    r.push_back(sphere_spec(k).r());
    res.push_back(out.residual);
    wrong.push_back(residual_norm(QuasimodeSpec::make(2, 2.0 * kPi, 3, k), b).residual);
  }
  const auto flat = fit_power_law(r, res);
  EXPECT_LE(flat.exponent, 0.1);
  EXPECT_LT(res.back(), 1.0);
  EXPECT_NEAR(fit_power_law(r, wrong).exponent, 1.0, 0.1);
  const spectral::SphereBasis b(40);
  const auto zero = residual_norm(QuasimodeSpec::make(2, 2.0 * kPi, 2, 0), b);
  EXPECT_TRUE(std::isfinite(zero.residual));
}

TEST(Residual, LocalCutoffCopyGrowsAndSorBasisAgrees) {
  const spectral::SphereBasis b(120);
  const double lo = residual_norm(sphere_spec(20), b, ResidualMode::LocalCutoff).residual;
  const double hi = residual_norm(sphere_spec(80), b, ResidualMode::LocalCutoff).residual;
  EXPECT_GT(hi / lo, 3.0);
  // The finite-volume basis reproduces the sphere value while its
  // discretization error is small against r_k^2.
  const spectral::SorBasis sor(geometry::Profile::sine(), 0, 80.0);
  const spectral::SphereBasis ref(60);
  EXPECT_NEAR(residual_norm(sphere_spec(20), sor).residual, residual_norm(sphere_spec(20), ref).residual, 0.01);
  const auto torus = spectral::TorusBasis::square(2.0 * kPi, 10.0);
  EXPECT_THROW(residual_norm(sphere_spec(5), torus), UnsupportedError);
}
