#include "footcal/covariance.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "footcal/error.hpp"

namespace footcal {

// Accumulated relative to the first sample, so a constant series has an
// exact mean and exactly zero deviations.
Eigen::Vector3d sample_mean(std::span<const Eigen::Vector3d> x) {
  if (x.empty()) return Eigen::Vector3d::Zero();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& v : x) sum += v - x.front();
  return x.front() + sum / static_cast<double>(x.size());
}

Eigen::Matrix3d sample_cross_covariance(std::span<const Eigen::Vector3d> x,
                                        std::span<const Eigen::Vector3d> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidSeries,
                "covariance of series with lengths " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
  if (x.size() < 2) throw Error(ErrorCode::kInvalidSeries, "covariance needs at least two samples");
  const Eigen::Vector3d mx = sample_mean(x);
  const Eigen::Vector3d my = sample_mean(y);
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  for (std::size_t n = 0; n < x.size(); ++n) {
    acc.noalias() += (x[n] - mx) * (y[n] - my).transpose();
  }
  return acc / static_cast<double>(x.size() - 1);
}

CovarianceSet covariance_quartet(std::span<const Eigen::Vector3d> imu,
                                 std::span<const Eigen::Vector3d> foot) {
  if (imu.size() != foot.size()) {
    throw Error(ErrorCode::kInvalidSeries,
                "IMU and foot series lengths differ (" + std::to_string(imu.size()) + " vs " +
                    std::to_string(foot.size()) + ")");
  }
  if (imu.size() < 2) throw Error(ErrorCode::kInvalidSeries, "covariance needs at least two samples");

  CovarianceSet cov;
  cov.mean_i = sample_mean(imu);
  cov.mean_f = sample_mean(foot);
  for (std::size_t n = 0; n < imu.size(); ++n) {
    const Eigen::Vector3d di = imu[n] - cov.mean_i;
    const Eigen::Vector3d df = foot[n] - cov.mean_f;
    cov.sigma_ii.noalias() += di * di.transpose();
    cov.sigma_ff.noalias() += df * df.transpose();
    cov.sigma_if.noalias() += di * df.transpose();
  }
  const double norm = 1.0 / static_cast<double>(imu.size() - 1);
  cov.sigma_ii *= norm;
  cov.sigma_ff *= norm;
  cov.sigma_if *= norm;
  cov.sigma_fi = cov.sigma_if.transpose();
  return cov;
}

Eigen::Matrix3d covariance_ff(const AngularVelocitySeries& series) {
  series.validate();
  if (series.frame != Frame::kFootKinematic) {
    throw Error(ErrorCode::kInvalidSeries, "covariance_ff expects a FootKinematic series");
  }
  return sample_cross_covariance(series.samples, series.samples);
}

double condition_number(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) throw Error(ErrorCode::kDomain, "condition_number: non-finite matrix");
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return kInfiniteCondition;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::kDomain, "condition_number: matrix is not symmetric");
  }
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(m).singularValues();
  if (sv(2) < kSingularFloor * sv(0)) return kInfiniteCondition;
  return sv(0) / sv(2);
}

}  // namespace footcal
