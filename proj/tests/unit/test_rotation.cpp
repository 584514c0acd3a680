#include <gtest/gtest.h>

#include <random>

#include "footcal/rotation.hpp"
#include "oracles.hpp"

namespace footcal {
namespace {

TEST(Rotation, EulerMatchesElementaryProduct) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-179.0, 179.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d e(u(rng), u(rng) / 2.0, u(rng));
    const Eigen::Matrix3d r = rotation_from_euler_deg(e);
    EXPECT_LT((r - oracle::euler_matrix(e.x(), e.y(), e.z())).cwiseAbs().maxCoeff(), 1e-14);
    const EulerExtraction back = euler_from_rotation(r);
    EXPECT_FALSE(back.gimbal_lock);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(wrap_deg(back.euler_deg(k) - e(k)), 0.0, 1e-9);
  }
}

TEST(Rotation, GimbalLockFlagged) {
  const EulerExtraction e = euler_from_rotation(rotation_from_euler_deg({10.0, 89.8, 20.0}));
  EXPECT_TRUE(e.gimbal_lock);
  EXPECT_FALSE(euler_from_rotation(rotation_from_euler_deg({10.0, 89.0, 20.0})).gimbal_lock);
}

TEST(Rotation, WrapRange) {
  EXPECT_DOUBLE_EQ(wrap_deg(180.0), 180.0);
  EXPECT_DOUBLE_EQ(wrap_deg(-180.0), 180.0);
  EXPECT_DOUBLE_EQ(wrap_deg(370.0), 10.0);
  EXPECT_DOUBLE_EQ(wrap_deg(-190.0), 170.0);
}

TEST(Rotation, GeodesicAngle) {
  const Eigen::Matrix3d a = rotation_from_euler_deg({0.0, 0.0, 30.0});
  EXPECT_NEAR(geodesic_angle_deg(a, Eigen::Matrix3d::Identity()), 30.0, 1e-12);
  EXPECT_NEAR(geodesic_angle_deg(a, a), 0.0, 1e-6);
}

TEST(Rotation, RandomRotationsAreProper) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(is_rotation(random_rotation(rng), 1e-12));
  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_FALSE(is_rotation(reflection, 1e-6));
}

}  // namespace
}  // namespace footcal
