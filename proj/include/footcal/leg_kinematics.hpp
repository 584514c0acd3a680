#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "footcal/series.hpp"

namespace footcal {

enum class Joint : std::size_t { kHip = 0, kThigh = 1, kCalf = 2 };

inline constexpr std::size_t kNumJoints = 3;
inline constexpr std::array<Joint, kNumJoints> kJoints = {Joint::kHip, Joint::kThigh,
                                                         Joint::kCalf};

std::string_view to_string(Joint joint);

struct JointLimit {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double angle) const { return angle >= lower && angle <= upper; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

/// Modified-DH twist angles and joint position limits of a three-joint leg.
/// Defaults describe a Go2-class leg.
struct LegGeometry {
  double twist_hip = 0.0;
  double twist_thigh = -std::numbers::pi / 2.0;
  double twist_calf = 0.0;
  double twist_foot = 0.0;
  std::array<JointLimit, kNumJoints> limits = {
      JointLimit{-0.84, 0.84}, JointLimit{-1.5, 3.4}, JointLimit{-2.7, -0.8}};

  const JointLimit& limit(Joint j) const { return limits[static_cast<std::size_t>(j)]; }
  JointLimit& limit(Joint j) { return limits[static_cast<std::size_t>(j)]; }

  /// True when the twists match the assignment the closed-form foot velocity
  /// is valid for: hip = calf = foot = 0, thigh = -90 deg.
  bool has_supported_twists() const;

  /// Throws kDomain unless every limit has lower < upper and all values are finite.
  void validate() const;

  /// Midpoint of each joint's limit interval.
  std::array<double, kNumJoints> limit_midpoints() const;
};

/// Joint angles (rad) and rates (rad/s) on a uniform time grid.
struct JointTrajectory {
  std::vector<double> time;
  std::array<std::vector<double>, kNumJoints> angle;
  std::array<std::vector<double>, kNumJoints> rate;

  std::size_t size() const { return time.size(); }

  const std::vector<double>& angle_of(Joint j) const {
    return angle[static_cast<std::size_t>(j)];
  }
  const std::vector<double>& rate_of(Joint j) const {
    return rate[static_cast<std::size_t>(j)];
  }

  /// Allocates all seven sequences with `samples` zeros.
  static JointTrajectory zeros(std::vector<double> time_grid);

  /// Equal lengths >= 2, uniform grid, finite values. Throws kInvalidSeries.
  void validate() const;
};

/// Foot-end angular velocity of a fixed-base leg. `phi` is the summed
/// thigh + calf angle, `phi_rate` its derivative:
///   ( -hip_rate * sin(phi), -hip_rate * cos(phi), phi_rate ).
/// Throws kDomain on non-finite input and kUnsupportedGeometry when the
/// geometry's twists differ from the supported assignment.
Eigen::Vector3d foot_angular_velocity(const LegGeometry& geometry, double phi,
                                      double hip_rate, double phi_rate);

/// Applies foot_angular_velocity sample by sample. Output frame is always
/// Frame::kFootKinematic.
AngularVelocitySeries trajectory_to_foot_velocity(const LegGeometry& geometry,
                                                  const JointTrajectory& trajectory);

struct JointRangeReport {
  double range = 0.0;  // max - min over the trajectory
  bool in_bounds = true;
};

std::array<JointRangeReport, kNumJoints> joint_limit_report(
    const JointTrajectory& trajectory, const LegGeometry& geometry);

}  // namespace footcal
