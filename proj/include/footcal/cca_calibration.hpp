#pragma once

#include <vector>

#include <Eigen/Core>

#include "footcal/covariance.hpp"
#include "footcal/series.hpp"

namespace footcal {

/// Resamples `series` at t + time_offset on its own grid by linear
/// interpolation. Samples whose shifted time leaves the recorded span are
/// dropped, so the result is a contiguous run of the original timestamps.
/// Throws kDomain if |time_offset| exceeds the series span.
AngularVelocitySeries shift_series(const AngularVelocitySeries& series, double time_offset);

/// Covariance quartet of a shifted IMU series and a foot series. Grids must
/// coincide sample for sample (kInvalidSeries otherwise).
CovarianceSet covariance_set(const AngularVelocitySeries& imu_shifted,
                             const AngularVelocitySeries& foot);

/// Relative singular-value floor below which an auto-covariance is treated
/// as insufficiently excited.
inline constexpr double kExcitationFloor = 1e-12;

struct TraceCorrelation {
  double value = 0.0;         // in [0, 1]
  bool clamped = false;       // raw value left [0, 1] by more than 1e-9
  double raw = 0.0;
};

/// sqrt(Tr(S_II^-1 S_IF S_FF^-1 S_FI) / 3). Throws kIllConditioned when
/// either auto-covariance is below kExcitationFloor.
TraceCorrelation trace_correlation(const CovarianceSet& cov);

struct OffsetSearch {
  double range = 0.25;  // candidates span [-range, +range], s
  double step = 0.0;    // s; 0 selects the series sample interval
  bool refine = true;   // second pass at step / 10 around the coarse maximum
};

struct ScanPoint {
  double time_offset = 0.0;
  double correlation = 0.0;
};

struct OffsetEstimate {
  double time_offset = 0.0;
  double correlation = 0.0;
  std::vector<ScanPoint> scan;  // sorted by time_offset
  std::size_t window_begin = 0;  // foot-sample window every candidate was scored on
  std::size_t window_end = 0;    // one past the last sample
};

/// Maximizes the trace correlation over candidate offsets. Every candidate is
/// scored on the same foot-sample window, the samples whose shifted IMU time
/// stays inside the record for all candidates. Ties go to the smallest |t_d|.
OffsetEstimate estimate_time_offset(const AngularVelocitySeries& imu,
                                    const AngularVelocitySeries& foot,
                                    const OffsetSearch& search);

enum class RotationConvention {
  kLeastSquares,    // R with R * w_I ~ w_F (default)
  kLiteralInverse,  // transpose of the above
};

/// Projects S_FF^-1 S_FI = U S V^T onto SO(3) as U diag(1, 1, det(U V^T)) V^T.
/// Throws kIllConditioned for a singular S_FF and kRankDeficient when two or
/// more axes are unexcited.
Eigen::Matrix3d estimate_rotation(const CovarianceSet& cov,
                                  RotationConvention convention = RotationConvention::kLeastSquares);

struct CalibrationOptions {
  OffsetSearch search;
  RotationConvention convention = RotationConvention::kLeastSquares;
};

struct CalibrationResult {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // foot <- IMU
  double time_offset = 0.0;                                // s
  double correlation = 0.0;
  double condition_number = 0.0;  // of S_FF on the scoring window
  std::vector<ScanPoint> scan;
};

/// Offset search, then rotation from the covariances at the winning offset.
CalibrationResult calibrate(const AngularVelocitySeries& imu, const AngularVelocitySeries& foot,
                            const CalibrationOptions& options);

/// sum_n |R w_I(n) - w_F(n)|^2 over paired samples.
double alignment_residual(const Eigen::Matrix3d& rotation, const AngularVelocitySeries& imu,
                          const AngularVelocitySeries& foot);

}  // namespace footcal
