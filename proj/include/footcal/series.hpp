#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace footcal {

/// Which frame an angular-velocity stream is expressed in.
enum class Frame {
  kFootKinematic,  // foot-end frame, derived from joint encoders
  kFootImu,        // foot IMU body frame, as measured
};

std::string_view to_string(Frame frame);
Frame frame_from_string(std::string_view name);

/// Timestamped 3-axis angular velocity samples (rad/s) with a frame tag.
struct AngularVelocitySeries {
  std::vector<double> time;
  std::vector<Eigen::Vector3d> samples;
  Frame frame = Frame::kFootKinematic;

  std::size_t size() const { return samples.size(); }

  /// Throws kInvalidSeries on length mismatch or non-finite entries.
  void validate() const;
};

/// Relative tolerance on grid spacing uniformity.
inline constexpr double kGridTolerance = 1e-9;

/// Step of a uniform, strictly increasing grid with at least two points.
/// Throws kInvalidSeries if the grid is not uniform to kGridTolerance.
double uniform_step(std::span<const double> grid);

/// Uniform grid {start + i * step : i = 0 .. count-1}.
std::vector<double> make_grid(double start, double step, std::size_t count);

/// Linear interpolation of a uniformly sampled series at time t. Returns
/// false when t falls outside [time.front(), time.back()]. Fractional
/// positions within kGridTolerance of a sample index snap to that sample.
bool interpolate(const AngularVelocitySeries& series, double step, double t,
                 Eigen::Vector3d& out);

/// Same as interpolate() but holds the first/last sample outside the span.
Eigen::Vector3d interpolate_clamped(const AngularVelocitySeries& series,
                                    double step, double t);

}  // namespace footcal
