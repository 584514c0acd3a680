#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "footcal/cca_calibration.hpp"
#include "footcal/leg_kinematics.hpp"
#include "footcal/measurement_sim.hpp"
#include "footcal/trajectory_optimizer.hpp"

namespace footcal {

/// Shortest text that round-trips: 17 significant digits, %g style.
std::string format_double(double value);

// Trajectory dump:
//   t,theta_hip,theta_thigh,theta_calf,dtheta_hip,dtheta_thigh,dtheta_calf
void write_trajectory_csv(std::ostream& os, const JointTrajectory& trajectory);
JointTrajectory read_trajectory_csv(std::istream& is);

// Measurement dump: t,wx,wy,wz,frame
void write_measurement_csv(std::ostream& os, const AngularVelocitySeries& series);
AngularVelocitySeries read_measurement_csv(std::istream& is);

// Ground-truth sidecar: {"euler_deg": [roll, pitch, yaw], "t_d_s": t_d}
nlohmann::json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& doc);

// Optimizer export: {A, B, f, T, N, rho, posture, kappa_final, iterations,
// restarts, converged, feasible, kappa_history}
nlohmann::json optimization_to_json(const OptimizationResult& result);
BasisSpec basis_from_json(const nlohmann::json& doc);

// Calibration report: {t_d_s, euler_deg, rotation_matrix (row-major),
// correlation, condition_number, scan: [[t_d, r], ...]}
nlohmann::json calibration_to_json(const CalibrationResult& result);

nlohmann::json geometry_to_json(const LegGeometry& geometry);
LegGeometry geometry_from_json(const nlohmann::json& doc);
nlohmann::json optimizer_config_to_json(const OptimizerConfig& config);
OptimizerConfig optimizer_config_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace footcal
