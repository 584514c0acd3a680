#pragma once

#include <limits>
#include <span>

#include <Eigen/Core>

#include "footcal/series.hpp"

namespace footcal {

/// Auto- and cross-covariances of an IMU stream (I) and a kinematic foot
/// stream (F), 1/(N-1) normalized with sample-mean centering.
/// sigma_fi is always the exact transpose of sigma_if.
struct CovarianceSet {
  Eigen::Matrix3d sigma_ii = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sigma_ff = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sigma_if = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sigma_fi = Eigen::Matrix3d::Zero();
  Eigen::Vector3d mean_i = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_f = Eigen::Vector3d::Zero();
};

Eigen::Vector3d sample_mean(std::span<const Eigen::Vector3d> x);

/// (1/(N-1)) * sum (x_n - mean_x)(y_n - mean_y)^T. Requires equal lengths >= 2.
Eigen::Matrix3d sample_cross_covariance(std::span<const Eigen::Vector3d> x,
                                        std::span<const Eigen::Vector3d> y);

/// Covariance quartet over two equal-length sample spans.
CovarianceSet covariance_quartet(std::span<const Eigen::Vector3d> imu,
                                 std::span<const Eigen::Vector3d> foot);

/// Auto-covariance of a kinematic foot series. Throws kInvalidSeries for
/// fewer than two samples or a series not tagged FootKinematic.
Eigen::Matrix3d covariance_ff(const AngularVelocitySeries& series);

/// Returned by condition_number() when the smallest singular value is below
/// kSingularFloor times the largest.
inline constexpr double kInfiniteCondition = std::numeric_limits<double>::infinity();
inline constexpr double kSingularFloor = 1e-15;

/// Ratio of the extreme singular values of a symmetric PSD matrix.
/// Throws kDomain when the matrix is asymmetric beyond 1e-9 (relative).
double condition_number(const Eigen::Matrix3d& m);

}  // namespace footcal
