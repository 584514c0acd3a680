#include "footcal/series.hpp"

#include <cmath>
#include <string>

#include "footcal/error.hpp"

namespace footcal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kInvalidSeries: return "invalid_series";
    case ErrorCode::kUnsupportedGeometry: return "unsupported_geometry";
    case ErrorCode::kIllConditioned: return "ill_conditioned";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kNoValidCandidate: return "no_valid_candidate";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

std::string_view to_string(Frame frame) {
  return frame == Frame::kFootKinematic ? "FootKinematic" : "FootIMU";
}

Frame frame_from_string(std::string_view name) {
  if (name == "FootKinematic") return Frame::kFootKinematic;
  if (name == "FootIMU") return Frame::kFootImu;
  throw Error(ErrorCode::kIo, "unknown frame tag '" + std::string(name) + "'");
}

void AngularVelocitySeries::validate() const {
  if (time.size() != samples.size()) {
    throw Error(ErrorCode::kInvalidSeries,
                "series has " + std::to_string(time.size()) + " timestamps but " +
                    std::to_string(samples.size()) + " samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(time[i]) || !samples[i].allFinite()) {
      throw Error(ErrorCode::kInvalidSeries,
                  "non-finite entry at sample " + std::to_string(i));
    }
  }
}

double uniform_step(std::span<const double> grid) {
  if (grid.size() < 2) {
    throw Error(ErrorCode::kInvalidSeries, "grid needs at least two points");
  }
  const double step =
      (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::kInvalidSeries, "grid is not strictly increasing");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (std::abs(d - step) > kGridTolerance * step) {
      throw Error(ErrorCode::kInvalidSeries,
                  "grid spacing is not uniform at index " + std::to_string(i));
    }
  }
  return step;
}

std::vector<double> make_grid(double start, double step, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = start + static_cast<double>(i) * step;
  }
  return grid;
}

namespace {

// Fractional sample position of t, snapped to an integer when within
// tolerance so integer-sample shifts reproduce samples exactly.
double sample_position(const AngularVelocitySeries& series, double step, double t) {
  double pos = (t - series.time.front()) / step;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < kGridTolerance) pos = nearest;
  return pos;
}

Eigen::Vector3d lerp_at(const AngularVelocitySeries& series, double pos) {
  const auto last = static_cast<double>(series.size() - 1);
  if (pos >= last) return series.samples.back();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return series.samples[i];
  return (1.0 - w) * series.samples[i] + w * series.samples[i + 1];
}

}  // namespace

bool interpolate(const AngularVelocitySeries& series, double step, double t,
                 Eigen::Vector3d& out) {
  const double pos = sample_position(series, step, t);
  if (pos < 0.0 || pos > static_cast<double>(series.size() - 1)) return false;
  out = lerp_at(series, pos);
  return true;
}

Eigen::Vector3d interpolate_clamped(const AngularVelocitySeries& series,
                                    double step, double t) {
  const double pos = sample_position(series, step, t);
  if (pos <= 0.0) return series.samples.front();
  return lerp_at(series, pos);
}

}  // namespace footcal
