#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "footcal/error.hpp"
#include "footcal/leg_kinematics.hpp"
#include "footcal/trajectory_optimizer.hpp"
#include "oracles.hpp"

namespace footcal {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(FootVelocity, ZeroPhiPureHipRate) {
  const Eigen::Vector3d w = foot_angular_velocity({}, 0.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(w.x(), 0.0);
  EXPECT_DOUBLE_EQ(w.y(), -1.0);
  EXPECT_DOUBLE_EQ(w.z(), 0.0);
}

TEST(FootVelocity, QuarterTurnPhi) {
  const Eigen::Vector3d w = foot_angular_velocity({}, kPi / 2.0, 1.0, 0.0);
  EXPECT_NEAR(w.x(), -1.0, 1e-15);
  EXPECT_NEAR(w.y(), 0.0, 1e-15);
  EXPECT_NEAR(w.z(), 0.0, 1e-15);
}

TEST(FootVelocity, AllZero) {
  EXPECT_EQ(foot_angular_velocity({}, 0.3, 0.0, 0.0), Eigen::Vector3d::Zero());
}

TEST(FootVelocity, MatchesRotationChain) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double phi = u(rng), h = u(rng), p = u(rng);
    const Eigen::Vector3d w = foot_angular_velocity({}, phi, h, p);
    EXPECT_LT((w - oracle::foot_velocity(phi, h, p)).norm(), 1e-12);
  }
}

TEST(FootVelocity, RejectsOtherTwists) {
  LegGeometry g;
  g.twist_calf = 0.1;
  try {
    foot_angular_velocity(g, 0.0, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedGeometry);
  }
  EXPECT_THROW(foot_angular_velocity({}, std::nan(""), 1.0, 0.0), Error);
}

TEST(TrajectoryToFoot, ZeroTrajectory) {
  const JointTrajectory t = JointTrajectory::zeros(make_grid(0.0, 0.01, 100));
  const AngularVelocitySeries s = trajectory_to_foot_velocity({}, t);
  ASSERT_EQ(s.size(), 100u);
  EXPECT_EQ(s.frame, Frame::kFootKinematic);
  for (const auto& w : s.samples) EXPECT_EQ(w, Eigen::Vector3d::Zero());
}

TEST(TrajectoryToFoot, SampleWiseEqualsScalarOperation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  JointTrajectory t = JointTrajectory::zeros(make_grid(0.0, 0.01, 10));
  for (std::size_t n = 0; n < 10; ++n) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      t.angle[j][n] = u(rng);
      t.rate[j][n] = u(rng);
    }
  }
  const AngularVelocitySeries s = trajectory_to_foot_velocity({}, t);
  for (std::size_t n = 0; n < 10; ++n) {
    const Eigen::Vector3d w = foot_angular_velocity({}, t.angle[1][n] + t.angle[2][n], t.rate[0][n],
                                                    t.rate[1][n] + t.rate[2][n]);
    EXPECT_EQ(s.samples[n], w);
  }
}

TEST(TrajectoryToFoot, SingleHarmonicMeansVanish) {
  const BasisSpec spec = BasisSpec::for_offset_range(0.25, {1.0}, {1.0});
  const auto grid = one_period_grid(spec.period, 500.0);
  const AngularVelocitySeries s = trajectory_to_foot_velocity({}, eval_basis(spec, grid));
  double my = 0.0, mz = 0.0;
  for (const auto& w : s.samples) {
    my += w.y();
    mz += w.z();
  }
  const double n = static_cast<double>(s.size());
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * n;
  EXPECT_LE(std::abs(my / n), tol);
  EXPECT_LE(std::abs(mz / n), tol);
}

TEST(JointLimits, ConstantMidRange) {
  LegGeometry g;
  JointTrajectory t = JointTrajectory::zeros(make_grid(0.0, 0.01, 20));
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    std::fill(t.angle[j].begin(), t.angle[j].end(), g.limits[j].midpoint());
  }
  for (const auto& r : joint_limit_report(t, g)) {
    EXPECT_EQ(r.range, 0.0);
    EXPECT_TRUE(r.in_bounds);
  }
}

TEST(JointLimits, OneSampleAboveUpperLimit) {
  LegGeometry g;
  JointTrajectory t = JointTrajectory::zeros(make_grid(0.0, 0.01, 20));
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    std::fill(t.angle[j].begin(), t.angle[j].end(), g.limits[j].midpoint());
  }
  t.angle[1][7] = g.limits[1].upper + 0.1;
  const auto report = joint_limit_report(t, g);
  EXPECT_TRUE(report[0].in_bounds);
  EXPECT_FALSE(report[1].in_bounds);
  EXPECT_TRUE(report[2].in_bounds);
}

TEST(JointLimits, SinusoidRange) {
  LegGeometry g;
  JointTrajectory t = JointTrajectory::zeros(make_grid(0.0, 0.001, 1001));
  for (std::size_t n = 0; n < t.size(); ++n) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      t.angle[j][n] = g.limits[j].midpoint() + 0.5 * std::sin(2.0 * kPi * t.time[n]);
    }
  }
  for (const auto& r : joint_limit_report(t, g)) {
    EXPECT_NEAR(r.range, 1.0, 1e-9);
    EXPECT_TRUE(r.in_bounds);
  }
}

TEST(JointLimits, GeometryValidation) {
  LegGeometry g;
  EXPECT_NO_THROW(g.validate());
  g.limit(Joint::kHip) = {0.5, -0.5};
  EXPECT_THROW(g.validate(), Error);
}

}  // namespace
}  // namespace footcal
