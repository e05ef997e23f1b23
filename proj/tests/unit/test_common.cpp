#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qlab/common/errors.hpp"
#include "qlab/common/execution.hpp"
#include "qlab/common/fit.hpp"
#include "qlab/common/ode.hpp"
#include "qlab/common/quadrature.hpp"
#include "qlab/common/smooth.hpp"
#include "qlab/common/types.hpp"

using namespace qlab;

TEST(Quadrature, GaussLegendreIsExactOnPolynomials) {
  for (int order : {2, 5, 16, 64}) {
    const int deg = 2 * order - 1;
    const double q = integrate_panels([&](double x) { return std::pow(x, deg - 1) + 1.0; }, 0.0, 1.0, 1, order);
    EXPECT_NEAR(q, 1.0 / deg + 1.0, 1e-13) << order;
  }
}

TEST(Quadrature, OscillatoryEstimateIsHonest) {
  auto f = [](double x) { return std::cos(200.0 * x); };
  auto r = integrate_with_estimate(f, 0.0, 1.0, 0.05);
  EXPECT_NEAR(r.value, std::sin(200.0) / 200.0, 1e-13);
  EXPECT_LT(r.error, 1e-10);
}

TEST(Smooth, StepIsMonotoneAndSymmetric) {
  EXPECT_EQ(smooth_step(-0.1), 0.0);
  EXPECT_EQ(smooth_step(1.2), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-14);
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double t = i / 1000.0;
    const double v = smooth_step(t);
    EXPECT_GE(v, prev);
    EXPECT_NEAR(v + smooth_step(1.0 - t), 1.0, 1e-13);
    prev = v;
  }
  // Derivative equals the normalized mollifier density.
  const double h = 1e-6, t = 0.3;
  const double d = (smooth_step(t + h) - smooth_step(t - h)) / (2 * h);
  const double total = integrate_panels([](double u) { return mollifier(2 * u - 1); }, 0.0, 1.0, 64, 16);
  EXPECT_NEAR(d, mollifier(2 * t - 1) / total, 1e-7);
}

TEST(Ode, HarmonicOscillatorAndDenseOutput) {
  auto rhs = [](std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  ode::DormandPrince dp(rhs, {});
  double worst_dense = 0.0;
  auto obs = [&](const ode::DenseStep& st) {
    for (int k = 1; k < 4; ++k) {
      const double t = st.t0 + st.h * k / 4.0;
      auto y = st.eval(t);
      worst_dense = std::max(worst_dense, std::abs(y[0] - std::cos(t)));
    }
    return true;
  };
  auto s = dp.integrate(0.0, 20.0, {1.0, 0.0}, obs);
  EXPECT_NEAR(s.y_end[0], std::cos(20.0), 1e-8);
  EXPECT_NEAR(s.y_end[1], -std::sin(20.0), 1e-8);
  EXPECT_LT(worst_dense, 1e-8);
}

TEST(Ode, ObserverCanStop) {
  auto rhs = [](std::span<const double>, std::span<double> dy) { dy[0] = 1.0; };
  ode::Tolerance tol;
  tol.h_max = 0.1;
  ode::DormandPrince dp(rhs, tol);
  auto s = dp.integrate(0.0, 10.0, {0.0}, [](const ode::DenseStep& st) { return st.t1() < 1.0; });
  EXPECT_TRUE(s.stopped_by_observer);
  EXPECT_LT(s.y_end[0], 1.2);
}

TEST(Fit, PowerLawRecoversExponent) {
  std::vector<double> x, y;
  for (int k = 1; k <= 8; ++k) {
    x.push_back(10.0 * k);
    y.push_back(3.0 * std::pow(10.0 * k, 0.5));
  }
  const auto f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, 0.5, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-10);
  EXPECT_LT(f.exponent_stderr, 1e-10);
}

TEST(Fit, RejectsBadInput) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{1, 2, -3, 4, 5};
  EXPECT_THROW(fit_power_law(x, y), DomainError);
  std::vector<double> x3{1, 2, 3}, y3{1, 2, 3};
  EXPECT_THROW(fit_power_law(x3, y3), PreconditionError);
}

TEST(Execution, ParallelMatchesSerialAndPropagatesErrors) {
  std::vector<double> a(1000), b(1000);
  for_each_index(a.size(), Execution::Serial, [&](std::size_t i) { a[i] = std::sin(double(i)); });
  for_each_index(b.size(), Execution::Parallel, [&](std::size_t i) { b[i] = std::sin(double(i)); });
  EXPECT_EQ(a, b);
  EXPECT_THROW(for_each_index(10, Execution::Parallel,
                              [](std::size_t i) {
                                if (i == 7) throw NumericalError("boom");
                              }),
               NumericalError);
}

TEST(Types, SphereAreaAndAngleWrap) {
  EXPECT_NEAR(unit_sphere_area(2), 2 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4 * kPi, 1e-14);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-14);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-14);
}
