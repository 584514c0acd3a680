#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "footcal/leg_kinematics.hpp"
#include "footcal/series.hpp"

namespace footcal {

/// Extrinsic rotation (IMU frame -> foot frame) and IMU-minus-encoder time offset.
struct GroundTruth {
  Eigen::Matrix3d rotation_f_from_i = Eigen::Matrix3d::Identity();
  double time_offset = 0.0;  // s

  static GroundTruth from_euler_deg(const Eigen::Vector3d& euler_deg, double time_offset);
  Eigen::Vector3d euler_deg() const;

  /// Rotation to 1e-12 and |time_offset| <= offset_range. Throws kDomain.
  void validate(double offset_range) const;
};

/// White gyroscope noise given as a density in deg/s/sqrt(Hz).
struct NoiseModel {
  double density = 0.0;       // deg/s/sqrt(Hz)
  double sample_rate = 500.0;  // Hz
  std::uint64_t seed = 0;

  /// Per-sample standard deviation, rad/s: density * sqrt(sample_rate).
  double sigma() const;
  void validate() const;
};

/// IMU readings for a kinematic foot series. Sample n is
///   R^T * w_F(t_n - t_d) + noise
/// where w_F is linearly interpolated (first/last sample held outside the
/// recorded span) and noise is i.i.d. Gaussian per axis. Timestamps are the
/// unshifted input grid. Throws kInvalidSeries when the input is not
/// FootKinematic or its rate does not match the noise model.
AngularVelocitySeries simulate_imu(const AngularVelocitySeries& foot_series,
                                   const GroundTruth& truth, const NoiseModel& noise);

enum class GaitKind { kWalk, kSpin, kWave };

std::string_view to_string(GaitKind kind);

struct GaitParams {
  double period = 1.0;                                // s
  std::array<double, kNumJoints> amplitudes{};        // rad, hip/thigh/calf
  std::array<double, kNumJoints> posture = {0.0, 0.8, -1.5};  // rad, standing pose
  double duration = 10.0;                             // s
  double sample_rate = 500.0;                         // Hz

  static GaitParams defaults(GaitKind kind);
  void validate() const;
};

/// Deterministic periodic joint profiles with analytic rates. With phase
/// u = frac(t / period) and w = 2 pi / period:
///
///   Walk  hip   = a_h sin(w t)
///         thigh = a_t (2 s(u) - 1),  s = cycloid rise over the swing half
///                 (u < 1/2) and cycloid return over the stance half
///         calf  = -a_c sin^2(w t) during swing, 0 during stance
///   Spin  hip   = a_h sin(w t), thigh = a_t sin(2 w t), calf = a_c cos(w t)
///   Wave  hip   = a_h sin(8 w t), thigh = a_t sin(w t), calf = a_c sin(w t)
///
/// Each joint adds its posture angle. The grid is {i / sample_rate} for
/// i < round(duration * sample_rate).
JointTrajectory baseline_gait(GaitKind kind, const GaitParams& params);

/// Frequency multiplier of the Wave gait's hip tremor.
inline constexpr int kWaveHipHarmonic = 8;

}  // namespace footcal
