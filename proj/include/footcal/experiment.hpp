#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "footcal/cca_calibration.hpp"
#include "footcal/leg_kinematics.hpp"
#include "footcal/measurement_sim.hpp"
#include "footcal/trajectory_optimizer.hpp"

namespace footcal {

enum class Motion { kA2I, kWalk, kSpin, kWave };
enum class FootId { kFL, kFR, kRL, kRR };

std::string_view to_string(Motion motion);
std::string_view to_string(FootId foot);
Motion motion_from_string(std::string_view name);
FootId foot_from_string(std::string_view name);

struct FootSetup {
  FootId id = FootId::kFL;
  LegGeometry geometry;
  GroundTruth truth;
};

struct ExperimentConfig {
  std::vector<FootSetup> feet;
  std::vector<double> noise_densities;  // deg/s/sqrt(Hz)
  std::vector<Motion> motions;
  OptimizerConfig optimizer;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;  // empty: no files written
  double duration = 10.0;            // s of recorded motion per run
  double encoder_noise = 0.0;        // rad, std dev added to encoder angles
  bool write_scans = true;

  /// Throws kDomain when a list is empty or a truth violates its offset range.
  void validate() const;
};

/// Four feet with seeded random mounting rotations and offsets in +/-100 ms,
/// the three gyro noise levels 0.006 / 0.03 / 0.06 deg/s/sqrt(Hz), all four
/// motions and seeds 1..20.
ExperimentConfig default_experiment(std::uint64_t truth_seed = 2024);

/// Mounting rotations of a real Go2 installation (roll, pitch, yaw in deg):
/// FL (104, 17, 21), FR (136, -11, 55), RL (56, -32, -129), RR (92, -21, 115).
std::vector<FootSetup> go2_mounting_preset();

ExperimentConfig experiment_from_json(const nlohmann::json& doc);
nlohmann::json experiment_to_json(const ExperimentConfig& config);

struct RotationError {
  double degrees = 0.0;   // Euler-difference norm, or the geodesic angle under gimbal lock
  double geodesic_deg = 0.0;
  bool gimbal_lock = false;
};

/// Norm of the wrapped per-axis Euler differences between the estimate and
/// the truth angles (intrinsic x-y-z, degrees). Falls back to the geodesic
/// angle when either Euler extraction is near gimbal lock.
RotationError rotation_error(const Eigen::Matrix3d& estimate, const Eigen::Vector3d& truth_euler_deg);

struct ReportRow {
  FootId foot = FootId::kFL;
  Motion motion = Motion::kA2I;
  double density = 0.0;
  std::uint64_t seed = 0;
  double cn = 0.0;
  double cc = 0.0;
  double re_deg = 0.0;
  double geodesic_deg = 0.0;
  bool gimbal_lock = false;
  double td_estimate_s = 0.0;
  double td_error_ms = 0.0;
  double wall_time_s = 0.0;  // reported in timing.csv only
  std::string error;         // empty on success, "<code>: <message>" otherwise

  bool ok() const { return error.empty(); }
};

struct SummaryCell {
  Motion motion = Motion::kA2I;
  double density = 0.0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double median_cn = 0.0;
  double median_cc = 0.0;
  double median_re_deg = 0.0;
  double median_abs_td_error_ms = 0.0;
};

struct MatrixReport {
  std::vector<ReportRow> rows;  // sorted by foot, motion, density, seed
  std::vector<SummaryCell> summary;
  std::vector<OptimizationResult> optimizations;  // one per foot when A2I ran
};

/// Median of the finite entries; NaN when there are none.
double median(std::vector<double> values);

/// Runs every (foot, motion, density, seed) cell. Cell failures are recorded
/// in the row. When config.output_dir is set, writes rows.csv (appended as
/// cells finish), summary.csv, summary.json, timing.csv, one basis JSON per
/// foot and, if enabled, scans/<foot>_<motion>_<density>_<seed>.csv.
MatrixReport run_matrix(const ExperimentConfig& config);

std::vector<SummaryCell> summarize(const std::vector<ReportRow>& rows);

std::string rows_csv_header();
std::string row_to_csv(const ReportRow& row);
std::string summary_to_csv(const std::vector<SummaryCell>& summary);
nlohmann::json summary_to_json(const std::vector<SummaryCell>& summary);

/// Deterministic per-cell noise seed; depends only on the cell's own key.
std::uint64_t cell_seed(std::uint64_t seed, FootId foot, Motion motion, double density);

/// The optimizer configuration used for one foot (seed offset by foot index).
OptimizerConfig foot_optimizer_config(const OptimizerConfig& base, FootId foot);

}  // namespace footcal
