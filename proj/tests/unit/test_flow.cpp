#include <gtest/gtest.h>

#include <cmath>

#include "qlab/common/errors.hpp"
#include "qlab/flow/jacobi.hpp"
#include "qlab/flow/returns.hpp"
#include "qlab/flow/trajectory.hpp"
#include "qlab/geometry/models.hpp"

using namespace qlab;
using namespace qlab::geometry;
using namespace qlab::flow;

namespace {
// Perimeter of the (a, c) principal ellipse of the (1, 0.8, 0.6) ellipsoid,
// computed independently with mpmath's complete elliptic integral E.
constexpr double kUmbilicPeriod = 5.1053997727;
}  // namespace

TEST(Flow, GreatCircleMatchesClosedForm) {
  RoundSphere s(2);
  const Vec z = s.north_pole();
  const auto traj = integrate(s, make_state(s, z, Eigen::Vector2d(1.0, 0.0)), 20.0);
  for (double t : {0.5, 3.0, 11.7, 20.0}) {
    const auto st = traj.state_at(t);
    const Vec expect = std::cos(t) * z + std::sin(t) * Eigen::Vector3d(1.0, 0.0, 0.0);
    EXPECT_LT((st.x - expect).norm(), 1e-9) << t;
  }
}

TEST(Flow, SpeedAndConstraintArePreserved) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  const Vec z = resolve_point(e, "generic");
  const auto traj = integrate(e, make_state(e, z, Eigen::Vector2d(0.3, 1.0)), 100.0);
  EXPECT_LT(traj.speed_deviation(), 1e-9);
  EXPECT_LT(traj.max_constraint_residual(), 1e-9);
  EXPECT_LT(traj.max_speed_drift(), 1e-9);
  SurfaceOfRevolution r(Profile::bumped_sine(0.08, 1.2, 0.5));
  const auto t2 = integrate(r, make_state(r, resolve_point(r, "generic"), Eigen::Vector2d(0.2, 1.0)), 100.0);
  EXPECT_LT(t2.speed_deviation(), 1e-9);
}

TEST(Flow, RejectsStatesOffTheBundle) {
  RoundSphere s(2);
  CotangentState bad = make_state(s, s.north_pole(), Eigen::Vector2d(1.0, 0.0));
  bad.xi *= 1.01;
  EXPECT_THROW(integrate(s, bad, 1.0), DomainError);
}

TEST(Flow, TorusIsStraightLine) {
  FlatTorus t = FlatTorus::square(2);
  const Vec v = Eigen::Vector2d(0.6, 0.8);
  const auto traj = integrate(t, make_state(t, Vec::Zero(2), v), 30.0);
  EXPECT_LT(t.reduce(traj.state_at(30.0).x - 30.0 * v).norm(), 1e-9);
}

TEST(Flow, SphereReturnsAtTwoPi) {
  RoundSphere s(2);
  for (const char* p : {"pole", "generic"}) {
    const Vec z = resolve_point(s, p);
    for (const Vec& d : direction_grid(2, 6)) {
      const auto r = detect_returns(s, z, d, 7.0);
      ASSERT_EQ(r.size(), 1u);
      EXPECT_NEAR(r[0].time, 2 * kPi, 1e-8);
      EXPECT_LT(r[0].gap, 1e-7);
      EXPECT_LT(r[0].miss, 1e-8);
    }
  }
}

TEST(Flow, TorusReturnsOnlyForRationalDirections) {
  FlatTorus t = FlatTorus::square(2);
  auto r = detect_returns(t, Vec::Zero(2), Eigen::Vector2d(1.0, 1.0), 20.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].time, 2 * kPi * std::sqrt(2.0), 1e-9);
  r = detect_returns(t, Vec::Zero(2), Eigen::Vector2d(1.0, std::sqrt(2.0)), 60.0);
  EXPECT_TRUE(r.empty());
}

TEST(Flow, SorPoleMeridianReturns) {
  SurfaceOfRevolution r(Profile::bumped_sine(0.08, 1.2, 0.5));
  const auto rets = detect_returns(r, r.north_pole(), Eigen::Vector2d(0.3, -1.0), 7.0);
  ASSERT_EQ(rets.size(), 1u);
  EXPECT_NEAR(rets[0].time, 2 * kPi, 1e-9);
  EXPECT_LT(rets[0].gap, 1e-9);
}

TEST(Flow, EllipsoidUmbilicReturnTimeIsConstant) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  const Vec z = e.umbilics()[0];
  for (const Vec& d : direction_grid(2, 5)) {
    ReturnOptions opt;
    opt.max_returns = 1;
    const auto r = detect_returns(e, z, d, 6.0, opt);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0].time, kUmbilicPeriod, 1e-8);
    EXPECT_LT(r[0].miss, 1e-8);
  }
}

TEST(Flow, ReturnToleranceMustBeSmall) {
  RoundSphere s(2);
  ReturnOptions opt;
  opt.epsilon_return = 0.5;
  EXPECT_THROW(detect_returns(s, s.north_pole(), Eigen::Vector2d(1, 0), 7.0, opt), PreconditionError);
}

TEST(Jacobi, SphereConjugatePoints) {
  RoundSphere s(2);
  const auto rep = jacobi_conjugate_points(s, s.north_pole(), Eigen::Vector2d(0.2, 1.0), 2 * kPi);
  ASSERT_EQ(rep.points.size(), 2u);
  EXPECT_NEAR(rep.points[0].time, kPi, 1e-6);
  EXPECT_NEAR(rep.points[1].time, 2 * kPi, 1e-6);
  EXPECT_EQ(rep.beta, 2);
  EXPECT_TRUE(rep.endpoint_degenerate);
  RoundSphere s3(3);
  const auto rep3 = jacobi_conjugate_points(s3, s3.north_pole(), Eigen::Vector3d(0.2, 1.0, -0.4), 2 * kPi);
  EXPECT_EQ(rep3.beta, 4);
  ASSERT_EQ(rep3.points.size(), 2u);
  EXPECT_EQ(rep3.points[0].multiplicity, 2);
}

TEST(Jacobi, DeterminantVanishesToOrderNMinusOne) {
  RoundSphere s3(3);
  const auto sol = solve_jacobi(s3, s3.north_pole(), Eigen::Vector3d(1.0, 0.0, 0.0), 0.5);
  const double d1 = sol.J(1e-2).determinant(), d2 = sol.J(1e-1).determinant();
  EXPECT_NEAR(std::log(d2 / d1) / std::log(10.0), 2.0, 1e-2);
}

TEST(Jacobi, TorusHasNoConjugatePoints) {
  FlatTorus t = FlatTorus::square(2);
  const auto rep = jacobi_conjugate_points(t, Vec::Zero(2), Eigen::Vector2d(1.0, 0.0), 50.0);
  EXPECT_EQ(rep.beta, 0);
  const auto sol = solve_jacobi(t, Vec::Zero(2), Eigen::Vector2d(1.0, 0.0), 3.0);
  EXPECT_NEAR(sol.J(3.0)(0, 0), 3.0, 1e-9);
}

TEST(Jacobi, MorseIndexOfBlowDown) {
  RoundSphere s(2);
  EXPECT_EQ(morse_index_of_blowdown(s, s.north_pole(), 2 * kPi, 4), 2);
  RoundSphere s3(3);
  EXPECT_EQ(morse_index_of_blowdown(s3, s3.north_pole(), 2 * kPi, 4), 4);
  SurfaceOfRevolution r(Profile::sine());
  EXPECT_EQ(morse_index_of_blowdown(r, r.north_pole(), 2 * kPi, 4), 2);
  FlatTorus t = FlatTorus::square(2);
  // Axis directions do return at 2 pi; the 60 degree direction never does.
  EXPECT_THROW(morse_index_of_blowdown(t, Vec::Zero(2), 2 * kPi, 6), PreconditionError);
}

TEST(Jacobi, EllipsoidUmbilicIndex) {
  TriaxialEllipsoid e(1.0, 0.8, 0.6);
  EXPECT_EQ(morse_index_of_blowdown(e, e.umbilics()[0], kUmbilicPeriod, 4), 2);
}
