#include "footcal/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace footcal {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

Eigen::Matrix3d rotation_from_euler_deg(const Eigen::Vector3d& euler_deg) {
  const Eigen::Matrix3d rx = Eigen::AngleAxisd(euler_deg.x() * kDeg, Eigen::Vector3d::UnitX())
                                 .toRotationMatrix();
  const Eigen::Matrix3d ry = Eigen::AngleAxisd(euler_deg.y() * kDeg, Eigen::Vector3d::UnitY())
                                 .toRotationMatrix();
  const Eigen::Matrix3d rz = Eigen::AngleAxisd(euler_deg.z() * kDeg, Eigen::Vector3d::UnitZ())
                                 .toRotationMatrix();
  return rx * ry * rz;
}

EulerExtraction euler_from_rotation(const Eigen::Matrix3d& r) {
  // Rx(a) Ry(b) Rz(c):
  //   r02 = sin b, r12 = -sin a cos b, r22 = cos a cos b,
  //   r01 = -cos b sin c, r00 = cos b cos c
  EulerExtraction out;
  const double sin_pitch = std::clamp(r(0, 2), -1.0, 1.0);
  const double pitch = std::asin(sin_pitch);
  out.gimbal_lock = std::abs(std::abs(pitch) / kDeg - 90.0) < kGimbalMarginDeg;
  double roll = 0.0;
  double yaw = 0.0;
  if (std::abs(sin_pitch) < 1.0 - 1e-12) {
    roll = std::atan2(-r(1, 2), r(2, 2));
    yaw = std::atan2(-r(0, 1), r(0, 0));
  } else {
    // Only roll +/- yaw is observable; attribute it all to roll.
    roll = std::atan2(r(2, 1), r(1, 1));
  }
  out.euler_deg = Eigen::Vector3d(wrap_deg(roll / kDeg), pitch / kDeg, wrap_deg(yaw / kDeg));
  return out;
}

double wrap_deg(double angle_deg) {
  double wrapped = std::fmod(angle_deg, 360.0);
  if (wrapped <= -180.0) wrapped += 360.0;
  if (wrapped > 180.0) wrapped -= 360.0;
  return wrapped;
}

double geodesic_angle_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const Eigen::Matrix3d rel = a * b.transpose();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) / kDeg;
}

bool is_rotation(const Eigen::Matrix3d& m, double tolerance) {
  if (!m.allFinite()) return false;
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tolerance && std::abs(m.determinant() - 1.0) <= tolerance;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace footcal
