#include "footcal/measurement_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "footcal/error.hpp"
#include "footcal/rotation.hpp"

namespace footcal {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Cycloid rise from 0 to 1 over x in [0, 1], zero slope at both ends.
double cycloid(double x) { return x - std::sin(kTwoPi * x) / kTwoPi; }
double cycloid_slope(double x) { return 1.0 - std::cos(kTwoPi * x); }
}  // namespace

GroundTruth GroundTruth::from_euler_deg(const Eigen::Vector3d& euler_deg, double time_offset) {
  GroundTruth truth;
  truth.rotation_f_from_i = rotation_from_euler_deg(euler_deg);
  truth.time_offset = time_offset;
  return truth;
}

Eigen::Vector3d GroundTruth::euler_deg() const {
  return euler_from_rotation(rotation_f_from_i).euler_deg;
}

void GroundTruth::validate(double offset_range) const {
  if (!is_rotation(rotation_f_from_i, 1e-12)) {
    throw Error(ErrorCode::kDomain, "ground-truth rotation is not orthonormal with det +1");
  }
  if (!std::isfinite(time_offset) || std::abs(time_offset) > offset_range) {
    throw Error(ErrorCode::kDomain, "ground-truth time offset exceeds the offset range");
  }
}

double NoiseModel::sigma() const { return density * std::sqrt(sample_rate) * kDegToRad; }

void NoiseModel::validate() const {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw Error(ErrorCode::kDomain, "noise density must be >= 0");
  }
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw Error(ErrorCode::kDomain, "noise sample rate must be positive");
  }
}

AngularVelocitySeries simulate_imu(const AngularVelocitySeries& foot_series,
                                   const GroundTruth& truth, const NoiseModel& noise) {
  foot_series.validate();
  noise.validate();
  if (foot_series.frame != Frame::kFootKinematic) {
    throw Error(ErrorCode::kInvalidSeries, "simulate_imu expects a FootKinematic series");
  }
  const double step = uniform_step(foot_series.time);
  if (std::abs(step * noise.sample_rate - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidSeries,
                "series rate " + std::to_string(1.0 / step) + " Hz does not match noise model rate " +
                    std::to_string(noise.sample_rate) + " Hz");
  }

  const Eigen::Matrix3d imu_from_foot = truth.rotation_f_from_i.transpose();
  const double sigma = noise.sigma();
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  AngularVelocitySeries out;
  out.frame = Frame::kFootImu;
  out.time = foot_series.time;
  out.samples.reserve(foot_series.size());
  for (double t : foot_series.time) {
    Eigen::Vector3d w =
        imu_from_foot * interpolate_clamped(foot_series, step, t - truth.time_offset);
    if (sigma > 0.0) {
      const double nx = gauss(rng);
      const double ny = gauss(rng);
      const double nz = gauss(rng);
      w += sigma * Eigen::Vector3d(nx, ny, nz);
    }
    out.samples.push_back(w);
  }
  return out;
}

std::string_view to_string(GaitKind kind) {
  switch (kind) {
    case GaitKind::kWalk: return "Walk";
    case GaitKind::kSpin: return "Spin";
    case GaitKind::kWave: return "Wave";
  }
  return "unknown";
}

GaitParams GaitParams::defaults(GaitKind kind) {
  GaitParams p;
  switch (kind) {
    case GaitKind::kWalk:
      p.period = 0.5;
      p.amplitudes = {0.05, 0.3, 0.4};
      break;
    case GaitKind::kSpin:
      p.period = 1.0;
      p.amplitudes = {0.3, 0.05, 0.05};
      break;
    case GaitKind::kWave:
      p.period = 1.0;
      p.amplitudes = {0.009, 0.4, 0.009};
      break;
  }
  return p;
}

void GaitParams::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(period) || !positive(duration) || !positive(sample_rate)) {
    throw Error(ErrorCode::kDomain, "gait period, duration and sample rate must be positive");
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (!std::isfinite(amplitudes[j]) || !std::isfinite(posture[j])) {
      throw Error(ErrorCode::kDomain, "gait amplitudes and posture must be finite");
    }
  }
  if (std::llround(duration * sample_rate) < 2) {
    throw Error(ErrorCode::kDomain, "gait duration shorter than two samples");
  }
}

JointTrajectory baseline_gait(GaitKind kind, const GaitParams& params) {
  params.validate();
  const auto count = static_cast<std::size_t>(std::llround(params.duration * params.sample_rate));
  JointTrajectory traj = JointTrajectory::zeros(make_grid(0.0, 1.0 / params.sample_rate, count));
  const double w = kTwoPi / params.period;
  const auto [a_hip, a_thigh, a_calf] = params.amplitudes;

  for (std::size_t n = 0; n < count; ++n) {
    const double t = traj.time[n];
    double hip = 0.0, hip_rate = 0.0;
    double thigh = 0.0, thigh_rate = 0.0;
    double calf = 0.0, calf_rate = 0.0;
    switch (kind) {
      case GaitKind::kWalk: {
        const double u = std::fmod(t, params.period) / params.period;
        hip = a_hip * std::sin(w * t);
        hip_rate = a_hip * w * std::cos(w * t);
        if (u < 0.5) {
          const double x = 2.0 * u;
          thigh = a_thigh * (2.0 * cycloid(x) - 1.0);
          thigh_rate = a_thigh * 4.0 * cycloid_slope(x) / params.period;
          const double s = std::sin(kTwoPi * u);
          calf = -a_calf * s * s;
          calf_rate = -a_calf * std::sin(2.0 * kTwoPi * u) * kTwoPi / params.period;
        } else {
          const double x = 2.0 * u - 1.0;
          thigh = a_thigh * (1.0 - 2.0 * cycloid(x));
          thigh_rate = -a_thigh * 4.0 * cycloid_slope(x) / params.period;
        }
        break;
      }
      case GaitKind::kSpin:
        hip = a_hip * std::sin(w * t);
        hip_rate = a_hip * w * std::cos(w * t);
        thigh = a_thigh * std::sin(2.0 * w * t);
        thigh_rate = a_thigh * 2.0 * w * std::cos(2.0 * w * t);
        calf = a_calf * std::cos(w * t);
        calf_rate = -a_calf * w * std::sin(w * t);
        break;
      case GaitKind::kWave: {
        const double wh = kWaveHipHarmonic * w;
        hip = a_hip * std::sin(wh * t);
        hip_rate = a_hip * wh * std::cos(wh * t);
        thigh = a_thigh * std::sin(w * t);
        thigh_rate = a_thigh * w * std::cos(w * t);
        calf = a_calf * std::sin(w * t);
        calf_rate = a_calf * w * std::cos(w * t);
        break;
      }
    }
    traj.angle[0][n] = params.posture[0] + hip;
    traj.angle[1][n] = params.posture[1] + thigh;
    traj.angle[2][n] = params.posture[2] + calf;
    traj.rate[0][n] = hip_rate;
    traj.rate[1][n] = thigh_rate;
    traj.rate[2][n] = calf_rate;
  }
  return traj;
}

}  // namespace footcal
