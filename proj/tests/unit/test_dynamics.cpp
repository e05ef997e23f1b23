#include <gtest/gtest.h>

#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/dynamics/classify.hpp"
#include "qlab/geometry/models.hpp"

using namespace qlab;
using namespace qlab::geometry;
using namespace qlab::dynamics;

TEST(Dynamics, SpherePoleIsBlowDownWithIdentityMap) {
  RoundSphere s(2);
  SweepParams p;
  p.grid_size = 16;
  p.T_max = 7.0;
  const auto pc = classify_point(s, s.north_pole(), p);
  EXPECT_EQ(pc.cls, PointClass::BlowDown);
  EXPECT_TRUE(pc.identity_map);
  EXPECT_NEAR(pc.mean_return_time, 2 * kPi, 1e-8);
  EXPECT_TRUE(pc.fixed_points.empty());
}

TEST(Dynamics, SorPolesAreBlowDown) {
  SurfaceOfRevolution r(Profile::bumped_sine(0.08, 1.2, 0.5));
  SweepParams p;
  p.grid_size = 12;
  p.T_max = 7.0;
  for (const Vec& z : {r.north_pole(), r.south_pole()}) {
    const auto pc = classify_point(r, z, p);
    EXPECT_EQ(pc.cls, PointClass::BlowDown);
    EXPECT_TRUE(pc.identity_map);
    EXPECT_NEAR(pc.mean_return_time, 2 * kPi, 1e-8);
  }
}

TEST(Dynamics, TorusHasNoBlowDown) {
  FlatTorus t = FlatTorus::square(2);
  SweepParams p;
  p.grid_size = 16;
  const auto pc = classify_point(t, Vec::Zero(2), p);
  EXPECT_TRUE(pc.cls == PointClass::NegligibleLoops || pc.cls == PointClass::Undetermined);
}

TEST(Dynamics, UmbilicReturnMapHasTwoFixedPoints) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  SweepParams p;
  p.grid_size = 64;
  p.T_max = 6.0;
  const auto pc = classify_point(e, e.umbilics()[0], p);
  EXPECT_EQ(pc.cls, PointClass::BlowDown);
  EXPECT_FALSE(pc.identity_map);
  ASSERT_EQ(pc.fixed_points.size(), 2u);
  int attracting = 0, repelling = 0;
  for (const auto& f : pc.fixed_points) {
    attracting += f.stability == Stability::Attracting;
    repelling += f.stability == Stability::Repelling;
  }
  EXPECT_EQ(attracting, 1);
  EXPECT_EQ(repelling, 1);
  // The map is conjugate to a circle map with reciprocal multipliers.
  EXPECT_NEAR(pc.fixed_points[0].multiplier * pc.fixed_points[1].multiplier, 1.0, 1e-3);
}

TEST(Dynamics, SerialAndParallelSweepsAgree) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  SweepParams p;
  p.grid_size = 8;
  p.T_max = 12.0;
  p.exec = Execution::Serial;
  const auto a = sample_loop_set(e, e.umbilics()[1], p);
  p.exec = Execution::Parallel;
  const auto b = sample_loop_set(e, e.umbilics()[1], p);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    ASSERT_EQ(a.samples[i].returns.size(), b.samples[i].returns.size());
    for (std::size_t k = 0; k < a.samples[i].returns.size(); ++k)
      EXPECT_EQ(a.samples[i].returns[k].time, b.samples[i].returns[k].time);
  }
}

TEST(Dynamics, DeltaLoopSetShrinksWithDelta) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  SweepParams p;
  p.grid_size = 16;
  p.T_max = 30.0;
  const auto est = sample_loop_set(e, e.umbilics()[0], p);
  double prev = 1.0;
  for (double d : {kPi, 1.0, 0.3, 0.1, 0.01, 1e-4}) {
    const double f = est.fraction_within(d);
    EXPECT_LE(f, prev);
    EXPECT_LE(f, est.measure_fraction);
    prev = f;
  }
}

TEST(Dynamics, OrbitConvergesToAttractingDirection) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  SweepParams p;
  p.T_max = 6.0;
  const auto o = iterate_return_map(e, e.umbilics()[0], Eigen::Vector2d(0.2, 1.0), 25, p);
  ASSERT_FALSE(o.truncated);
  const Vec& last = o.directions.back();
  const Vec& prev = o.directions[o.directions.size() - 2];
  EXPECT_LT((last - prev).norm(), 1e-6);
}

TEST(Dynamics, RecurrenceOnSphereIsImmediate) {
  RoundSphere s(2);
  SweepParams p;
  p.grid_size = 8;
  p.T_max = 7.0;
  const auto r = recurrence_estimate(s, s.north_pole(), 3, p);
  EXPECT_DOUBLE_EQ(r.fraction, 1.0);
  for (int k : r.first_recurrence) EXPECT_EQ(k, 1);
}

TEST(Dynamics, HorizonIsReported) {
  FlatTorus t = FlatTorus::square(2);
  SweepParams p;
  p.T_max = 10.0;
  EXPECT_THROW(first_return_map(t, Vec::Zero(2), Eigen::Vector2d(1.0, std::sqrt(2.0)), p), HorizonError);
}
