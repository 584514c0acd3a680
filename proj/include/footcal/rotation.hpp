#pragma once

#include <random>

#include <Eigen/Core>

namespace footcal {

// Euler angles throughout are intrinsic x-y-z, in degrees:
//   R = Rx(roll) * Ry(pitch) * Rz(yaw),  euler = (roll, pitch, yaw).
// Pitch is extracted in [-90, 90]; roll and yaw in (-180, 180].

Eigen::Matrix3d rotation_from_euler_deg(const Eigen::Vector3d& euler_deg);

struct EulerExtraction {
  Eigen::Vector3d euler_deg = Eigen::Vector3d::Zero();
  bool gimbal_lock = false;  // |pitch| within kGimbalMarginDeg of 90
};

inline constexpr double kGimbalMarginDeg = 0.5;

EulerExtraction euler_from_rotation(const Eigen::Matrix3d& rotation);

/// Wraps an angle in degrees into (-180, 180].
double wrap_deg(double angle_deg);

/// Angle of the relative rotation a * b^T, degrees in [0, 180].
double geodesic_angle_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

/// Orthogonality and unit determinant to within `tolerance` (max-abs norm).
bool is_rotation(const Eigen::Matrix3d& m, double tolerance);

/// Uniformly distributed rotation (Haar measure) from a unit quaternion.
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

}  // namespace footcal
