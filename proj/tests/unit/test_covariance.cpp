#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "footcal/cca_calibration.hpp"
#include "footcal/covariance.hpp"
#include "footcal/error.hpp"
#include "footcal/leg_kinematics.hpp"
#include "footcal/trajectory_optimizer.hpp"
#include "oracles.hpp"

namespace footcal {
namespace {

AngularVelocitySeries tagged(std::vector<Eigen::Vector3d> samples, Frame frame) {
  AngularVelocitySeries s;
  s.time = make_grid(0.0, 0.002, samples.size());
  s.samples = std::move(samples);
  s.frame = frame;
  return s;
}

TEST(CovarianceFF, ConstantSeriesIsZero) {
  const auto s = tagged(std::vector<Eigen::Vector3d>(20, Eigen::Vector3d(1, 2, 3)),
                        Frame::kFootKinematic);
  EXPECT_EQ(covariance_ff(s), Eigen::Matrix3d::Zero());
}

TEST(CovarianceFF, TwoPointSeries) {
  const auto s = tagged({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)}, Frame::kFootKinematic);
  EXPECT_EQ(covariance_ff(s), Eigen::Vector3d(2, 0, 0).asDiagonal().toDenseMatrix());
}

TEST(CovarianceFF, RejectsWrongFrameAndShortSeries) {
  EXPECT_THROW(covariance_ff(tagged({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)},
                                    Frame::kFootImu)),
               Error);
  EXPECT_THROW(covariance_ff(tagged({Eigen::Vector3d(1, 0, 0)}, Frame::kFootKinematic)), Error);
}

TEST(CovarianceFF, SingleHarmonicOverOnePeriodIsDiagonal) {
  const BasisSpec spec = BasisSpec::for_offset_range(0.25, {1.0}, {1.0});
  const auto traj = eval_basis(spec, one_period_grid(spec.period, 500.0));
  const Eigen::Matrix3d s = covariance_ff(trajectory_to_foot_velocity({}, traj));
  const double scale = s.diagonal().maxCoeff();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (r != c) EXPECT_LE(std::abs(s(r, c)), 1e-9 * scale);
    }
  }
}

// Even harmonics couple x and z; the off-diagonal is analytic, not round-off.
TEST(CovarianceFF, EvenHarmonicBreaksDiagonality) {
  const BasisSpec spec = BasisSpec::for_offset_range(0.25, {1.0, 1.0}, {1.0, 1.0});
  const auto traj = eval_basis(spec, one_period_grid(spec.period, 500.0));
  const Eigen::Matrix3d s = covariance_ff(trajectory_to_foot_velocity({}, traj));
  EXPECT_GT(std::abs(s(0, 2)), 1e-3 * s.diagonal().maxCoeff());
}

TEST(ConditionNumber, Examples) {
  EXPECT_DOUBLE_EQ(condition_number(Eigen::Matrix3d::Identity()), 1.0);
  EXPECT_NEAR(condition_number(Eigen::Vector3d(4, 2, 1).asDiagonal().toDenseMatrix()), 4.0, 1e-12);
  EXPECT_EQ(condition_number(Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix()),
            std::numeric_limits<double>::infinity());
}

TEST(ConditionNumber, RejectsAsymmetric) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 1) = 0.5;
  EXPECT_THROW(condition_number(m), Error);
}

TEST(ConditionNumber, ScaleInvariant) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto x = oracle::random_series(rng, 30);
    const Eigen::Matrix3d m = sample_cross_covariance(x, x);
    EXPECT_NEAR(condition_number(9.0 * m) / condition_number(m), 1.0, 1e-12);
    EXPECT_NEAR(condition_number(m) / oracle::eigen_condition(m), 1.0, 1e-9);
  }
}

TEST(CovarianceSet, IdenticalSeriesGiveEqualBlocks) {
  std::mt19937_64 rng(8);
  const auto x = oracle::random_series(rng, 40);
  const CovarianceSet c =
      covariance_set(tagged(x, Frame::kFootImu), tagged(x, Frame::kFootKinematic));
  EXPECT_EQ(c.sigma_ii, c.sigma_ff);
  EXPECT_EQ(c.sigma_if, c.sigma_ff);
  EXPECT_EQ(c.sigma_fi, c.sigma_ff);
}

TEST(CovarianceSet, ConstantFootGivesZeroBlocks) {
  std::mt19937_64 rng(8);
  const auto x = oracle::random_series(rng, 40);
  const std::vector<Eigen::Vector3d> foot(40, Eigen::Vector3d(0.1, 0.2, 0.3));
  const CovarianceSet c =
      covariance_set(tagged(x, Frame::kFootImu), tagged(foot, Frame::kFootKinematic));
  EXPECT_EQ(c.sigma_ff, Eigen::Matrix3d::Zero());
  EXPECT_EQ(c.sigma_if, Eigen::Matrix3d::Zero());
}

TEST(CovarianceSet, MatchesPairwiseOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_series(rng, 50, 2.0);
    const auto y = oracle::random_series(rng, 50, 0.5);
    const CovarianceSet c =
        covariance_set(tagged(x, Frame::kFootImu), tagged(y, Frame::kFootKinematic));
    EXPECT_LE(oracle::rel_diff(c.sigma_ii, oracle::pairwise_covariance(x, x)), 1e-12);
    EXPECT_LE(oracle::rel_diff(c.sigma_ff, oracle::pairwise_covariance(y, y)), 1e-12);
    EXPECT_LE(oracle::rel_diff(c.sigma_if, oracle::pairwise_covariance(x, y)), 1e-12);
    EXPECT_LE(oracle::rel_diff(c.sigma_fi, oracle::pairwise_covariance(y, x)), 1e-12);
    EXPECT_EQ(c.sigma_fi, c.sigma_if.transpose());
  }
}

TEST(CovarianceSet, RejectsMisalignedGrids) {
  std::mt19937_64 rng(2);
  auto imu = tagged(oracle::random_series(rng, 10), Frame::kFootImu);
  auto foot = tagged(oracle::random_series(rng, 10), Frame::kFootKinematic);
  foot.time = make_grid(0.001, 0.002, 10);
  EXPECT_THROW(covariance_set(imu, foot), Error);
  foot = tagged(oracle::random_series(rng, 9), Frame::kFootKinematic);
  EXPECT_THROW(covariance_set(imu, foot), Error);
}

}  // namespace
}  // namespace footcal
