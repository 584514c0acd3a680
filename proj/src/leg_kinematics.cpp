#include "footcal/leg_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "footcal/error.hpp"

namespace footcal {

namespace {
constexpr double kTwistTolerance = 1e-12;
}

std::string_view to_string(Joint joint) {
  switch (joint) {
    case Joint::kHip: return "hip";
    case Joint::kThigh: return "thigh";
    case Joint::kCalf: return "calf";
  }
  return "unknown";
}

bool LegGeometry::has_supported_twists() const {
  return std::abs(twist_hip) <= kTwistTolerance &&
         std::abs(twist_thigh + std::numbers::pi / 2.0) <= kTwistTolerance &&
         std::abs(twist_calf) <= kTwistTolerance && std::abs(twist_foot) <= kTwistTolerance;
}

void LegGeometry::validate() const {
  for (Joint j : kJoints) {
    const JointLimit& lim = limit(j);
    if (!std::isfinite(lim.lower) || !std::isfinite(lim.upper) || !(lim.lower < lim.upper)) {
      throw Error(ErrorCode::kDomain,
                  "joint limit for " + std::string(to_string(j)) + " must satisfy lower < upper");
    }
  }
  if (!std::isfinite(twist_hip) || !std::isfinite(twist_thigh) || !std::isfinite(twist_calf) ||
      !std::isfinite(twist_foot)) {
    throw Error(ErrorCode::kDomain, "twist angles must be finite");
  }
}

std::array<double, kNumJoints> LegGeometry::limit_midpoints() const {
  return {limits[0].midpoint(), limits[1].midpoint(), limits[2].midpoint()};
}

JointTrajectory JointTrajectory::zeros(std::vector<double> time_grid) {
  JointTrajectory traj;
  const std::size_t n = time_grid.size();
  traj.time = std::move(time_grid);
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    traj.angle[j].assign(n, 0.0);
    traj.rate[j].assign(n, 0.0);
  }
  return traj;
}

void JointTrajectory::validate() const {
  const std::size_t n = time.size();
  if (n < 2) throw Error(ErrorCode::kInvalidSeries, "trajectory needs at least two samples");
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (angle[j].size() != n || rate[j].size() != n) {
      throw Error(ErrorCode::kInvalidSeries,
                  "trajectory sequences for " + std::string(to_string(kJoints[j])) +
                      " do not match the time grid length");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(angle[j].begin(), angle[j].end(), finite) ||
        !std::all_of(rate[j].begin(), rate[j].end(), finite)) {
      throw Error(ErrorCode::kInvalidSeries, "trajectory contains non-finite values");
    }
  }
  uniform_step(time);
}

Eigen::Vector3d foot_angular_velocity(const LegGeometry& geometry, double phi,
                                      double hip_rate, double phi_rate) {
  if (!std::isfinite(phi) || !std::isfinite(hip_rate) || !std::isfinite(phi_rate)) {
    throw Error(ErrorCode::kDomain, "foot_angular_velocity: non-finite input");
  }
  if (!geometry.has_supported_twists()) {
    throw Error(ErrorCode::kUnsupportedGeometry,
                "closed-form foot velocity requires twists (0, -90, 0, 0) deg");
  }
  return {-hip_rate * std::sin(phi), -hip_rate * std::cos(phi), phi_rate};
}

AngularVelocitySeries trajectory_to_foot_velocity(const LegGeometry& geometry,
                                                  const JointTrajectory& trajectory) {
  trajectory.validate();
  const auto& hip_rate = trajectory.rate_of(Joint::kHip);
  const auto& thigh = trajectory.angle_of(Joint::kThigh);
  const auto& calf = trajectory.angle_of(Joint::kCalf);
  const auto& thigh_rate = trajectory.rate_of(Joint::kThigh);
  const auto& calf_rate = trajectory.rate_of(Joint::kCalf);

  AngularVelocitySeries out;
  out.frame = Frame::kFootKinematic;
  out.time = trajectory.time;
  out.samples.reserve(trajectory.size());
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    out.samples.push_back(foot_angular_velocity(geometry, thigh[n] + calf[n], hip_rate[n],
                                                thigh_rate[n] + calf_rate[n]));
  }
  return out;
}

std::array<JointRangeReport, kNumJoints> joint_limit_report(const JointTrajectory& trajectory,
                                                            const LegGeometry& geometry) {
  trajectory.validate();
  std::array<JointRangeReport, kNumJoints> report{};
  for (Joint j : kJoints) {
    const auto& angles = trajectory.angle_of(j);
    const auto [lo, hi] = std::minmax_element(angles.begin(), angles.end());
    const JointLimit& lim = geometry.limit(j);
    auto& entry = report[static_cast<std::size_t>(j)];
    entry.range = *hi - *lo;
    entry.in_bounds = lim.contains(*lo) && lim.contains(*hi);
  }
  return report;
}

}  // namespace footcal
