#include "footcal/cca_calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "footcal/error.hpp"

namespace footcal {

namespace {

constexpr const char* kAxisNames[] = {"x", "y", "z"};

void require_same_grid(const AngularVelocitySeries& a, const AngularVelocitySeries& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidSeries,
                "series lengths differ (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) return;
  const double step = uniform_step(a.time);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (std::abs(a.time[n] - b.time[n]) > kGridTolerance * step) {
      throw Error(ErrorCode::kInvalidSeries,
                  "series grids are not aligned at sample " + std::to_string(n));
    }
  }
}

void require_frames(const AngularVelocitySeries& imu, const AngularVelocitySeries& foot) {
  if (imu.frame != Frame::kFootImu || foot.frame != Frame::kFootKinematic) {
    throw Error(ErrorCode::kInvalidSeries,
                "expected an IMU series tagged FootIMU and a foot series tagged FootKinematic");
  }
}

// Foot axis that dominates a direction vector.
const char* dominant_axis(const Eigen::Vector3d& direction) {
  Eigen::Index idx = 0;
  direction.cwiseAbs().maxCoeff(&idx);
  return kAxisNames[idx];
}

void require_excited(const Eigen::Matrix3d& sigma, const char* name) {
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(sigma).singularValues();
  if (!(sv(0) > 0.0) || sv(2) < kExcitationFloor * sv(0)) {
    throw Error(ErrorCode::kIllConditioned,
                std::string(name) + " is singular; the motion does not excite all three axes");
  }
}

// IMU samples at foot times [begin, end) shifted by time_offset; the window
// must keep every shifted time inside the record.
std::vector<Eigen::Vector3d> shifted_window(const AngularVelocitySeries& imu, double step,
                                            std::size_t begin, std::size_t end,
                                            double time_offset) {
  std::vector<Eigen::Vector3d> out(end - begin);
  for (std::size_t n = begin; n < end; ++n) {
    if (!interpolate(imu, step, imu.time[n] + time_offset, out[n - begin])) {
      throw Error(ErrorCode::kDomain, "shifted sample outside the IMU record");
    }
  }
  return out;
}

struct Scorer {
  const AngularVelocitySeries& imu;
  const AngularVelocitySeries& foot;
  double step;
  std::size_t begin;
  std::size_t end;

  std::span<const Eigen::Vector3d> foot_window() const {
    return std::span<const Eigen::Vector3d>(foot.samples).subspan(begin, end - begin);
  }

  CovarianceSet covariances(double time_offset) const {
    const auto imu_window = shifted_window(imu, step, begin, end, time_offset);
    return covariance_quartet(imu_window, foot_window());
  }

  // NaN when the candidate's covariances are singular.
  double score(double time_offset) const {
    try {
      return trace_correlation(covariances(time_offset)).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIllConditioned) throw;
      return std::nan("");
    }
  }
};

bool better(const ScanPoint& cand, const ScanPoint& best) {
  if (std::isnan(cand.correlation)) return false;
  if (std::isnan(best.correlation) || cand.correlation > best.correlation) return true;
  return cand.correlation == best.correlation &&
         std::abs(cand.time_offset) < std::abs(best.time_offset);
}

}  // namespace

AngularVelocitySeries shift_series(const AngularVelocitySeries& series, double time_offset) {
  series.validate();
  const double step = uniform_step(series.time);
  const double span = series.time.back() - series.time.front();
  if (!std::isfinite(time_offset) || std::abs(time_offset) > span) {
    throw Error(ErrorCode::kDomain, "shift of " + std::to_string(time_offset) +
                                        " s exceeds the series span");
  }
  AngularVelocitySeries out;
  out.frame = series.frame;
  for (std::size_t n = 0; n < series.size(); ++n) {
    Eigen::Vector3d value;
    if (interpolate(series, step, series.time[n] + time_offset, value)) {
      out.time.push_back(series.time[n]);
      out.samples.push_back(value);
    }
  }
  return out;
}

CovarianceSet covariance_set(const AngularVelocitySeries& imu_shifted,
                             const AngularVelocitySeries& foot) {
  imu_shifted.validate();
  foot.validate();
  require_frames(imu_shifted, foot);
  require_same_grid(imu_shifted, foot);
  return covariance_quartet(imu_shifted.samples, foot.samples);
}

TraceCorrelation trace_correlation(const CovarianceSet& cov) {
  require_excited(cov.sigma_ii, "IMU auto-covariance");
  require_excited(cov.sigma_ff, "foot auto-covariance");
  const Eigen::Matrix3d lhs = cov.sigma_ii.partialPivLu().solve(cov.sigma_if);
  const Eigen::Matrix3d rhs = cov.sigma_ff.partialPivLu().solve(cov.sigma_fi);
  const double r2 = (lhs * rhs).trace() / 3.0;

  TraceCorrelation out;
  out.raw = r2 >= 0.0 ? std::sqrt(r2) : -std::sqrt(-r2);
  out.value = std::clamp(out.raw, 0.0, 1.0);
  out.clamped = out.raw < -1e-9 || out.raw > 1.0 + 1e-9;
  return out;
}

OffsetEstimate estimate_time_offset(const AngularVelocitySeries& imu,
                                    const AngularVelocitySeries& foot,
                                    const OffsetSearch& search) {
  imu.validate();
  foot.validate();
  require_frames(imu, foot);
  require_same_grid(imu, foot);
  const double dt = uniform_step(foot.time);
  const double step = search.step > 0.0 ? search.step : dt;
  if (!(search.range > 0.0) || !std::isfinite(search.range) || !std::isfinite(step)) {
    throw Error(ErrorCode::kDomain, "offset search range and step must be positive");
  }
  const double span = foot.time.back() - foot.time.front();
  if (search.range > span / 4.0) {
    throw Error(ErrorCode::kDomain, "offset search range exceeds a quarter of the series span");
  }

  const auto coarse_count = static_cast<long>(std::floor(search.range / step + 1e-9));
  const double margin = static_cast<double>(coarse_count) * step + (search.refine ? step : 0.0);
  const auto margin_samples = static_cast<std::size_t>(std::ceil(margin / dt - 1e-9));
  if (2 * margin_samples + 2 > foot.size()) {
    throw Error(ErrorCode::kDomain, "series too short for the offset search");
  }

  const Scorer scorer{imu, foot, dt, margin_samples, foot.size() - margin_samples};
  OffsetEstimate out;
  out.window_begin = scorer.begin;
  out.window_end = scorer.end;

  ScanPoint best{0.0, std::nan("")};
  for (long i = -coarse_count; i <= coarse_count; ++i) {
    const double tau = static_cast<double>(i) * step;
    const ScanPoint p{tau, scorer.score(tau)};
    if (!std::isnan(p.correlation)) out.scan.push_back(p);
    if (better(p, best)) best = p;
  }
  if (std::isnan(best.correlation)) {
    throw Error(ErrorCode::kNoValidCandidate,
                "trace correlation failed for every offset candidate");
  }

  if (search.refine) {
    const double center = best.time_offset;
    for (int j = -9; j <= 9; ++j) {
      if (j == 0) continue;
      const double tau = center + static_cast<double>(j) * step / 10.0;
      const ScanPoint p{tau, scorer.score(tau)};
      if (!std::isnan(p.correlation)) out.scan.push_back(p);
      if (better(p, best)) best = p;
    }
  }

  std::sort(out.scan.begin(), out.scan.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.time_offset < b.time_offset; });
  out.time_offset = best.time_offset;
  out.correlation = best.correlation;
  return out;
}

Eigen::Matrix3d estimate_rotation(const CovarianceSet& cov, RotationConvention convention) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> ff_svd(cov.sigma_ff,
                                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d ff_sv = ff_svd.singularValues();
  int vanishing = 0;
  for (int i = 0; i < 3; ++i) {
    if (!(ff_sv(i) > 0.0) || ff_sv(i) < kExcitationFloor * ff_sv(0)) ++vanishing;
  }
  if (vanishing >= 2) {
    throw Error(ErrorCode::kRankDeficient,
                "foot motion is rank deficient; deficient excitation axis: " +
                    std::string(dominant_axis(ff_svd.matrixV().col(2))) + " (and " +
                    dominant_axis(ff_svd.matrixV().col(1)) + ")");
  }
  if (vanishing == 1) {
    throw Error(ErrorCode::kIllConditioned,
                "foot auto-covariance is singular; deficient excitation axis: " +
                    std::string(dominant_axis(ff_svd.matrixV().col(2))));
  }

  const Eigen::Matrix3d m = ff_svd.solve(cov.sigma_fi);
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) < kExcitationFloor * sv(0)) {
    throw Error(ErrorCode::kRankDeficient,
                "cross-covariance is rank deficient; deficient excitation axis: " +
                    std::string(dominant_axis(svd.matrixU().col(2))));
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = u * d * v.transpose();
  return convention == RotationConvention::kLeastSquares ? r : Eigen::Matrix3d(r.transpose());
}

CalibrationResult calibrate(const AngularVelocitySeries& imu, const AngularVelocitySeries& foot,
                            const CalibrationOptions& options) {
  const OffsetEstimate offset = estimate_time_offset(imu, foot, options.search);
  const Scorer scorer{imu, foot, uniform_step(foot.time), offset.window_begin,
                      offset.window_end};
  const CovarianceSet cov = scorer.covariances(offset.time_offset);

  CalibrationResult result;
  result.time_offset = offset.time_offset;
  result.correlation = offset.correlation;
  result.scan = offset.scan;
  result.condition_number = condition_number(cov.sigma_ff);
  result.rotation = estimate_rotation(cov, options.convention);
  return result;
}

double alignment_residual(const Eigen::Matrix3d& rotation, const AngularVelocitySeries& imu,
                          const AngularVelocitySeries& foot) {
  require_same_grid(imu, foot);
  double sum = 0.0;
  for (std::size_t n = 0; n < imu.size(); ++n) {
    sum += (rotation * imu.samples[n] - foot.samples[n]).squaredNorm();
  }
  return sum;
}

}  // namespace footcal
