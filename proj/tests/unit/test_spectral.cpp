#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "qlab/common/errors.hpp"
#include "qlab/common/quadrature.hpp"
#include "qlab/spectral/kernels.hpp"
#include "qlab/spectral/projector.hpp"
#include "qlab/spectral/sor_basis.hpp"
#include "qlab/spectral/sphere_basis.hpp"
#include "qlab/spectral/torus_basis.hpp"

using namespace qlab;
using namespace qlab::spectral;

namespace {

Vec sphere_point(double th, double ph) {
  Vec x(3);
  x << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
  return x;
}

CoefficientVector random_coefficients(std::size_t n, std::size_t first, std::size_t last, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CoefficientVector f(n);
  for (std::size_t j = first; j < last; ++j) f.c[j] = cplx(g(rng), g(rng));
  return f;
}

// Gram matrix of 20 random basis functions under a product quadrature.
template <class Basis, class Quad>
double gram_defect(const Basis& b, std::size_t limit, Quad&& quad, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, limit - 1);
  std::vector<std::size_t> idx;
  while (idx.size() < 20) {
    const std::size_t j = pick(rng);
    if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t c = a; c < idx.size(); ++c) {
      const cplx v = quad([&](const Vec& x) { return b.evaluate(idx[a], x) * std::conj(b.evaluate(idx[c], x)); });
      worst = std::max(worst, std::abs(v - (a == c ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST(SphereBasis, GramMatrixUnderExactQuadrature) {
  SphereBasis b(20);
  const GaussRule& g = gauss_legendre(32);
  const int nphi = 64;
  auto quad = [&](auto&& fn) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      for (int k = 0; k < nphi; ++k)
        s += g.weights[i] * (2.0 * kPi / nphi) * fn(sphere_point(std::acos(g.nodes[i]), 2.0 * kPi * k / nphi));
    return s;
  };
  EXPECT_LT(gram_defect(b, b.size(), quad, 3), 1e-10);
}

TEST(SphereBasis, AdditionTheoremAndZonalPeak) {
  SphereBasis b(40);
  for (int l : {0, 3, 17, 40}) {
    const double expect = (2.0 * l + 1.0) / (4.0 * kPi);
    for (double th : {0.0, 0.7, 2.1, kPi}) {
      const Vec x = sphere_point(th, 1.3);
      double direct = 0.0;
      for (int m = -l; m <= l; ++m) direct += std::norm(b.evaluate(SphereBasis::index(l, m), x));
      EXPECT_NEAR(direct, expect, 1e-12 * std::max(1.0, expect));
      EXPECT_NEAR(b.density(SphereBasis::index(l, -l), SphereBasis::index(l, l) + 1, x), expect, 1e-14);
    }
    EXPECT_NEAR(std::abs(b.evaluate(SphereBasis::index(l, 0), sphere_point(0.0, 0.0))), std::sqrt(expect), 1e-12);
    EXPECT_NEAR(b.zonal_value(SphereBasis::index(l, 0), 0.0), std::sqrt(expect), 1e-12);
  }
  EXPECT_NEAR(b.evaluate(0, sphere_point(1.0, 2.0)).real(), 1.0 / std::sqrt(4.0 * kPi), 1e-15);
  EXPECT_NEAR(b.eigenvalue(SphereBasis::index(7, 2)), std::sqrt(56.0), 1e-14);
}

TEST(SphereBasis, SumEvaluationMatchesTermwise) {
  SphereBasis b(25);
  const CoefficientVector f = random_coefficients(b.size(), 0, b.size(), 5);
  const Vec x = sphere_point(1.1, -0.4);
  cplx direct(0.0, 0.0);
  for (std::size_t j = 0; j < b.size(); ++j) direct += f.c[j] * b.evaluate(j, x);
  EXPECT_LT(std::abs(direct - b.evaluate_sum(f, x)), 1e-11);
}

TEST(SphereBasis, ZonalSupIsAtThePole) {
  SphereBasis b(30);
  CoefficientVector f(b.size());
  f.c[SphereBasis::index(30, 0)] = 1.0;
  const SupResult s = sup_norm(b, f);
  EXPECT_NEAR(s.value, std::sqrt(61.0 / (4.0 * kPi)), 1e-10);
  EXPECT_NEAR(std::abs(s.argmax(2)), 1.0, 1e-12);
}

TEST(TorusBasis, MultiplicityAndWeylCount) {
  const TorusBasis b = TorusBasis::square(2.0 * kPi, 100.0);
  const std::size_t first = b.lower_index(5.0 - 1e-9), last = b.upper_index(5.0 + 1e-9);
  EXPECT_EQ(last - first, 12u);
  for (std::size_t j = first; j < last; ++j) EXPECT_EQ(b.eigenvalue(j), b.eigenvalue(first));
  const double weyl = 4.0 * kPi * kPi * 100.0 * 100.0 / (4.0 * kPi);
  EXPECT_NEAR(double(b.size()) / weyl, 1.0, 0.05);
}

TEST(TorusBasis, ConstantModulusAndGram) {
  Mat A(2, 2);
  A << 2.0, 0.7, 0.0, 1.5;
  const TorusBasis b(A, 12.0);
  const double cv = A.determinant();
  for (std::size_t j = 0; j < b.size(); j += 7) EXPECT_NEAR(std::abs(b.evaluate(j, Vec::Random(2))), 1.0 / std::sqrt(cv), 1e-14);
  const int N = 64;
  auto quad = [&](auto&& fn) {
    cplx s(0.0, 0.0);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) s += fn(Vec(A * Eigen::Vector2d(double(i) / N, double(k) / N)));
    return s * cv / double(N * N);
  };
  EXPECT_LT(gram_defect(b, b.size(), quad, 9), 1e-12);
  // Eigenvalues from the dual lattice directly.
  for (std::size_t j = 0; j < b.size(); j += 5) EXPECT_NEAR(b.wavevector(j).norm(), b.eigenvalue(j), 1e-12);
}

TEST(TorusBasis, StripKernelMatchesDirectGrid) {
  Mat A(2, 2);
  A << 2.0 * kPi, 0.5, 0.0, 5.0;
  const TorusBasis b(A, 15.0);
  const CoefficientVector f = random_coefficients(b.size(), 0, b.size(), 11);
  const SupResult direct = b.direct_sup(f, 48, 40, Execution::Serial);
  const SupResult serial = b.strip_sup(f, 48, 40, Execution::Serial);
  const SupResult par = b.strip_sup(f, 48, 40, Execution::Parallel);
  EXPECT_NEAR(serial.value, direct.value, 1e-10 * direct.value);
  EXPECT_EQ(serial.value, par.value);
  EXPECT_LT((serial.argmax - direct.argmax).norm(), 1e-12);
}

TEST(TorusBasis, AlignedExponentialsPeakAtOrigin) {
  const TorusBasis b = TorusBasis::square(2.0 * kPi, 20.0);
  CoefficientVector f(b.size());
  for (std::size_t j = b.lower_index(5.0 - 1e-9); j < b.upper_index(5.0 + 1e-9); ++j) f.c[j] = 1.0;
  const SupResult s = sup_norm(b, f);
  EXPECT_NEAR(s.value, 12.0 / (2.0 * kPi), 1e-10);
}

TEST(SorBasis, SineProfileReproducesSphereSpectrum) {
  const SorBasis b(geometry::Profile::sine(), -1, 30.0);
  const SphereBasis s(29);
  ASSERT_EQ(b.size(), s.size());
  for (std::size_t j = 1; j < b.size(); ++j) EXPECT_NEAR(b.eigenvalue(j) / s.eigenvalue(j), 1.0, 1e-3) << j;
  EXPECT_LT(b.eigenvalue(0) * b.eigenvalue(0), 1e-8);  // Laplace eigenvalue at roundoff level
  EXPECT_LE(b.resolution_change(), 1e-4);
  EXPECT_NEAR(b.volume(), 4.0 * kPi, 1e-9);
  // Ground state is the constant 1 / sqrt(area).
  for (double s0 : {0.0, 1.0, 2.5}) EXPECT_NEAR(std::abs(b.evaluate(0, Eigen::Vector2d(s0, 0.3))), 1.0 / std::sqrt(4.0 * kPi), 1e-8);
}

TEST(SorBasis, DiscreteOrthonormalityAndZonalPeak) {
  const SorBasis b(geometry::Profile::bumped_sine(0.1, 1.3, 0.5), -1, 12.0);
  const auto& W = b.weights();
  std::mt19937 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  for (int t = 0; t < 40; ++t) {
    const std::size_t i = pick(rng), k = pick(rng);
    double s = 0.0;
    const auto ui = b.radial_values(i), uk = b.radial_values(k);
    for (std::size_t n = 0; n < W.size(); ++n) s += W[n] * ui[n] * uk[n];
    const bool same_radial = b.angular(i) == b.angular(k) || b.angular(i) == -b.angular(k);
    if (i == k) {
      EXPECT_NEAR(s, 1.0, 1e-10);
    } else if (same_radial && b.eigenvalue(i) != b.eigenvalue(k)) {
      EXPECT_NEAR(s, 0.0, 1e-10);
    }
  }
  const SorBasis sine(geometry::Profile::sine(), 0, 25.0);
  for (std::size_t j : sine.zonal_indices()) {
    double peak = 0.0, at_pole = std::abs(sine.zonal_value(j, 0.0));
    for (int i = 0; i <= 2000; ++i) peak = std::max(peak, std::abs(sine.zonal_value(j, kPi * i / 2000.0)));
    EXPECT_NEAR(at_pole, peak, 1e-9 * peak);
  }
}

TEST(SorBasis, ResolutionAndMemoryGuards) {
  SorOptions tight;
  tight.resolution_tol = 1e-9;
  EXPECT_THROW(SorBasis(geometry::Profile::sine(), 3, 20.0, tight), ResolutionError);
  SorOptions small;
  small.max_entries = 1e4;
  EXPECT_THROW(SorBasis(geometry::Profile::sine(), -1, 20.0, small), PreconditionError);
  SorOptions coarse;
  coarse.intervals = 500;
  EXPECT_THROW(SorBasis(geometry::Profile::sine(), 0, 5.0, coarse), PreconditionError);
}

TEST(SorBasis, CacheRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "qlab_sor_cache_test";
  std::filesystem::remove_all(dir);
  const auto p = geometry::Profile::bumped_sine(0.05, 1.0, 0.4);
  const SorBasis a = SorBasis::cached(p, 2, 10.0, dir.string());
  const SorBasis b = SorBasis::cached(p, 2, 10.0, dir.string());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a.eigenvalue(j), b.eigenvalue(j));
    EXPECT_EQ(a.evaluate(j, Eigen::Vector2d(0.77, 0.2)), b.evaluate(j, Eigen::Vector2d(0.77, 0.2)));
  }
  std::filesystem::remove_all(dir);
}

TEST(Windows, ComplementarityIdempotenceAndDecomposition) {
  const TorusBasis b = TorusBasis::square(2.0 * kPi, 30.0);
  const CoefficientVector f = random_coefficients(b.size(), 0, b.size(), 4);
  const double mu = 7.3, lam = 10.0, delta = 0.3;
  const auto lo = apply_window(b, WindowSpec::low_pass(mu), f), hi = apply_window(b, WindowSpec::high_pass(mu), f);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(lo.c[j] + hi.c[j], f.c[j]);
  const WindowSpec chi = WindowSpec::symmetric(lam, delta);
  const auto once = apply_window(b, chi, f), twice = apply_window(b, chi, once);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(once.c[j], twice.c[j]);
  EXPECT_LE(once.l2_norm(), f.l2_norm());
  // (I - chi^delta) f = chi^1 (I - chi^delta) f + (I - chi^1) S_2lam f + S^perp_2lam f
  const auto chi1 = WindowSpec::symmetric(lam, 1.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double l = b.eigenvalue(j);
    const cplx left = chi.contains(l) ? 0.0 : f.c[j];
    cplx right = 0.0;
    if (chi1.contains(l) && !chi.contains(l)) right += f.c[j];
    if (!chi1.contains(l) && WindowSpec::low_pass(2 * lam).contains(l)) right += f.c[j];
    if (WindowSpec::high_pass(2 * lam).contains(l)) right += f.c[j];
    EXPECT_EQ(left, right);
  }
  EXPECT_THROW(WindowSpec::sharp(1.0, 0.0), DomainError);
}

TEST(Projector, ClosedFormsOnSphereAndTorus) {
  SphereBasis s(60);
  const double l = 40;
  const double lam = std::sqrt(l * (l + 1));
  const auto ps = projector_sup_norm(s, WindowSpec::sharp(lam - 0.1, 0.2));
  EXPECT_NEAR(ps.value, std::sqrt((2 * l + 1) / (4 * kPi)), 1e-12);
  EXPECT_EQ(ps.count, 81u);
  EXPECT_EQ(projector_sup_norm(s, WindowSpec::sharp(lam + 0.5, 0.2)).value, 0.0);

  const TorusBasis t = TorusBasis::square(2.0 * kPi, 60.0);
  const auto win = WindowSpec::sharp(40.0, 0.5);
  const auto [a, c] = win.index_range(t);
  const auto pt = projector_sup_norm(t, win);
  EXPECT_NEAR(pt.value, std::sqrt(double(c - a) / (4 * kPi * kPi)), 1e-12);
  // The same quantity is the sup of |sum_window e_j(0) conj e_j(x)|, attained at 0.
  CoefficientVector f(t.size());
  for (std::size_t j = a; j < c; ++j) f.c[j] = 1.0;
  EXPECT_NEAR(sup_norm(t, f).value / std::sqrt(double(c - a)), pt.value, 1e-10);
  EXPECT_THROW(projector_sup_norm(t, WindowSpec::sharp(59.9, 0.5)), DomainError);
}

TEST(Kernels, RhoHatNormalizationPositivityAndSupport) {
  const SmoothingKernel& k = SmoothingKernel::standard();
  EXPECT_NEAR(k.rho_hat(0.0), 1.0, 1e-10);
  for (double tau = 0.0; tau < k.tau_cut() + 5; tau += 0.37) EXPECT_GE(k.rho_hat(tau), 0.0);
  EXPECT_EQ(k.rho(0.5), 0.0);
  EXPECT_EQ(k.rho(0.7), 0.0);
  EXPECT_GT(k.rho(0.49), 0.0);
  EXPECT_LT(k.rho_hat(k.tau_cut() - 0.5) * k.rho_hat(k.tau_cut() - 0.5), 1e-10);
  // rho_hat against the cosine transform of rho itself.
  for (double tau : {0.0, 3.0, 10.0, 30.0}) {
    const double ft = 2.0 * integrate_panels([&](double t) { return k.rho(t) * std::cos(tau * t); }, 0.0, 0.5, 64, 16);
    EXPECT_NEAR(ft, k.rho_hat(tau), 1e-9) << tau;
  }
}

TEST(Kernels, WeightDecayBoundN4) {
  const SmoothingKernel& k = SmoothingKernel::standard();
  for (double T : {1.5, 3.0, 10.0}) {
    double cn = 0.0;
    for (double d = 0.0; d < 200.0; d += 0.01) cn = std::max(cn, k.weight(T, d, 0.0) * std::pow(1.0 + d, 4));
    EXPECT_TRUE(std::isfinite(cn));
    // The constant from T = 1.5 bounds the larger T as well.
    static double c15 = 0.0;
    if (T == 1.5) c15 = cn;
    EXPECT_LE(cn, c15 * (1.0 + 1e-12));
  }
}

TEST(Kernels, SmoothedSumDominatesSharpWindowAndConcentrates) {
  SphereBasis s(80);
  const SmoothingKernel& k = SmoothingKernel::standard();
  const Vec x = sphere_point(0.4, 0.9);
  const double lam = std::sqrt(50.0 * 51.0);
  const auto [a, c] = WindowSpec::sharp(lam, 1.0).index_range(s);
  const double sharp = s.density(a, c, x);
  double wmin = 1.0;
  for (double t = 0.0; t <= 1.0; t += 1e-3) wmin = std::min(wmin, k.weight(1.0, t, 0.0));
  EXPECT_GE(smoothed_sum(s, 1.0, lam, x), wmin * sharp);
  EXPECT_NEAR(smoothed_sum(s, 1e4, lam, x), 101.0 / (4 * kPi), 1e-12);
}

TEST(Kernels, DirectionCutoffMeasureAndTorusCapScaling) {
  const Vec c = Eigen::Vector2d(std::cos(0.3), std::sin(0.3));
  std::vector<double> ratio;
  const TorusBasis t = TorusBasis::square(2.0 * kPi, 230.0);
  for (double eps : {0.1, 0.2, 0.4}) {
    const auto b = DirectionCutoff::with_measure(c, eps * eps);
    EXPECT_NEAR(b.measure(), eps * eps, 1e-9);
    EXPECT_EQ(b.value(c) + b.complement(c), 1.0);
    ratio.push_back(smoothed_sum(t, 1.0, 200.0, Vec::Zero(2), &b) / (eps * eps * 200.0));
  }
  for (double r : ratio) EXPECT_NEAR(r / ratio[1], 1.0, 0.25);
  const auto b3 = DirectionCutoff::with_measure(Eigen::Vector3d(0, 0, 1), 0.05);
  EXPECT_NEAR(b3.measure(), 0.05, 1e-9);
  SphereBasis s(10);
  const auto b = DirectionCutoff::with_measure(c, 0.01);
  EXPECT_THROW(smoothed_sum(s, 1.0, 5.0, sphere_point(0, 0), &b), UnsupportedError);
}

TEST(Lemma2, ExactEigenfunctionsGiveZeroLeftSides) {
  const TorusBasis t = TorusBasis::square(2.0 * kPi, 45.0);
  CoefficientVector f(t.size());
  const std::size_t j = t.lower_index(20.0 - 1e-9);
  ASSERT_NEAR(t.eigenvalue(j), 20.0, 1e-12);
  f.c[j] = 1.0;
  const Lemma2Report r = lemma2_check(t, f, 20.0, 0.5);
  EXPECT_EQ(r.near_lhs, 0.0);
  EXPECT_EQ(r.mid_lhs, 0.0);
  EXPECT_NEAR(r.helmholtz, 0.0, 1e-9);
  const Admissibility a = admissibility_check(t, f, 20.0);
  EXPECT_NEAR(a.helmholtz, 0.0, 1e-9);
  EXPECT_EQ(a.high_sup, 0.0);
  EXPECT_EQ(a.l2, 1.0);
}

TEST(Lemma2, RandomFunctionsRespectTheBounds) {
  const TorusBasis t = TorusBasis::square(2.0 * kPi, 81.0);
  const double lam = 40.0;
  double worst = 0.0;
  for (unsigned seed = 0; seed < 5; ++seed) {
    CoefficientVector f = random_coefficients(t.size(), 0, t.size(), seed);
    for (std::size_t j = 0; j < f.size(); ++j) f.c[j] /= std::pow(1.0 + std::abs(t.eigenvalue(j) - lam), 2.0);
    const Lemma2Report r = lemma2_check(t, f, lam, 0.5);
    EXPECT_GT(r.near_lhs, 0.0);
    worst = std::max({worst, r.near_ratio(), r.mid_ratio()});
    for (const auto& band : r.bands) EXPECT_LT(band.ratio, 10.0);
  }
  EXPECT_LT(worst, 10.0);
}
