#include "footcal/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "footcal/error.hpp"
#include "footcal/rotation.hpp"

namespace footcal {

namespace {

constexpr std::string_view kTrajectoryHeader =
    "t,theta_hip,theta_thigh,theta_calf,dtheta_hip,dtheta_thigh,dtheta_calf";
constexpr std::string_view kMeasurementHeader = "t,wx,wy,wz,frame";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view text, std::size_t line_no) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": cannot parse number '" +
                                    std::string(text) + "'");
  }
  return value;
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

void expect_header(std::istream& is, std::string_view header) {
  std::string line;
  if (!std::getline(is, line) || trim_cr(line) != header) {
    throw Error(ErrorCode::kIo, "expected header '" + std::string(header) + "'");
  }
}

template <typename T>
T get_field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::kIo, std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& os, const JointTrajectory& trajectory) {
  trajectory.validate();
  os << kTrajectoryHeader << '\n';
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    os << format_double(trajectory.time[n]);
    for (std::size_t j = 0; j < kNumJoints; ++j) os << ',' << format_double(trajectory.angle[j][n]);
    for (std::size_t j = 0; j < kNumJoints; ++j) os << ',' << format_double(trajectory.rate[j][n]);
    os << '\n';
  }
}

JointTrajectory read_trajectory_csv(std::istream& is) {
  expect_header(is, kTrajectoryHeader);
  JointTrajectory traj;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view row = trim_cr(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != 7) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    traj.time.push_back(parse_double(fields[0], line_no));
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      traj.angle[j].push_back(parse_double(fields[1 + j], line_no));
      traj.rate[j].push_back(parse_double(fields[4 + j], line_no));
    }
  }
  traj.validate();
  return traj;
}

void write_measurement_csv(std::ostream& os, const AngularVelocitySeries& series) {
  series.validate();
  os << kMeasurementHeader << '\n';
  const std::string_view tag = to_string(series.frame);
  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto& w = series.samples[n];
    os << format_double(series.time[n]) << ',' << format_double(w.x()) << ','
       << format_double(w.y()) << ',' << format_double(w.z()) << ',' << tag << '\n';
  }
}

AngularVelocitySeries read_measurement_csv(std::istream& is) {
  expect_header(is, kMeasurementHeader);
  AngularVelocitySeries series;
  std::string line;
  std::size_t line_no = 1;
  bool first = true;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view row = trim_cr(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (fields.size() != 5) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const Frame frame = frame_from_string(fields[4]);
    if (first) {
      series.frame = frame;
      first = false;
    } else if (frame != series.frame) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": mixed frame tags");
    }
    series.time.push_back(parse_double(fields[0], line_no));
    series.samples.emplace_back(parse_double(fields[1], line_no), parse_double(fields[2], line_no),
                                parse_double(fields[3], line_no));
  }
  series.validate();
  return series;
}

nlohmann::json truth_to_json(const GroundTruth& truth) {
  const Eigen::Vector3d e = truth.euler_deg();
  return {{"euler_deg", {e.x(), e.y(), e.z()}}, {"t_d_s", truth.time_offset}};
}

GroundTruth truth_from_json(const nlohmann::json& doc) {
  const auto e = get_field<std::vector<double>>(doc, "euler_deg");
  if (e.size() != 3) throw Error(ErrorCode::kIo, "euler_deg needs three angles");
  return GroundTruth::from_euler_deg(Eigen::Vector3d(e[0], e[1], e[2]),
                                     get_field<double>(doc, "t_d_s"));
}

nlohmann::json optimization_to_json(const OptimizationResult& result) {
  const BasisSpec& s = result.spec;
  return {{"A", s.a},
          {"B", s.b},
          {"f", s.frequency},
          {"T", s.period},
          {"N", s.harmonics()},
          {"rho", s.calf_share},
          {"posture", s.posture},
          {"kappa_final", result.kappa_final},
          {"iterations", result.iterations},
          {"restarts", result.restarts},
          {"converged", result.converged},
          {"feasible", result.feasible},
          {"kappa_history", result.kappa_history}};
}

BasisSpec basis_from_json(const nlohmann::json& doc) {
  BasisSpec spec;
  spec.a = get_field<std::vector<double>>(doc, "A");
  spec.b = get_field<std::vector<double>>(doc, "B");
  spec.frequency = get_field<double>(doc, "f");
  spec.period = get_field<double>(doc, "T");
  spec.calf_share = doc.value("rho", 0.0);
  if (doc.contains("posture")) spec.posture = get_field<std::array<double, kNumJoints>>(doc, "posture");
  if (doc.contains("N") && get_field<std::size_t>(doc, "N") != spec.a.size()) {
    throw Error(ErrorCode::kIo, "N does not match the number of coefficients");
  }
  spec.validate();
  return spec;
}

nlohmann::json calibration_to_json(const CalibrationResult& result) {
  const Eigen::Vector3d e = euler_from_rotation(result.rotation).euler_deg;
  std::vector<double> rot;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(result.rotation(r, c));
  }
  nlohmann::json scan = nlohmann::json::array();
  for (const auto& p : result.scan) scan.push_back({p.time_offset, p.correlation});
  return {{"t_d_s", result.time_offset},
          {"euler_deg", {e.x(), e.y(), e.z()}},
          {"rotation_matrix", rot},
          {"correlation", result.correlation},
          {"condition_number", result.condition_number},
          {"scan", scan}};
}

nlohmann::json geometry_to_json(const LegGeometry& g) {
  nlohmann::json limits = nlohmann::json::object();
  for (Joint j : kJoints) limits[std::string(to_string(j))] = {g.limit(j).lower, g.limit(j).upper};
  return {{"twist_rad", {g.twist_hip, g.twist_thigh, g.twist_calf, g.twist_foot}},
          {"limits_rad", limits}};
}

LegGeometry geometry_from_json(const nlohmann::json& doc) {
  LegGeometry g;
  if (doc.contains("twist_rad")) {
    const auto tw = get_field<std::vector<double>>(doc, "twist_rad");
    if (tw.size() != 4) throw Error(ErrorCode::kIo, "twist_rad needs four angles");
    g.twist_hip = tw[0];
    g.twist_thigh = tw[1];
    g.twist_calf = tw[2];
    g.twist_foot = tw[3];
  }
  if (doc.contains("limits_rad")) {
    const auto& limits = doc.at("limits_rad");
    for (Joint j : kJoints) {
      const std::string name(to_string(j));
      if (!limits.contains(name)) continue;
      const auto lim = get_field<std::vector<double>>(limits, name.c_str());
      if (lim.size() != 2) throw Error(ErrorCode::kIo, "joint limit needs [lower, upper]");
      g.limit(j) = {lim[0], lim[1]};
    }
  }
  g.validate();
  return g;
}

nlohmann::json optimizer_config_to_json(const OptimizerConfig& c) {
  return {{"kappa_objective", c.kappa_objective},
          {"max_iterations", c.max_iterations},
          {"step_size", c.step_size},
          {"fd_epsilon", c.fd_epsilon},
          {"penalty_weights", c.penalty_weights},
          {"imu_frequency_hz", c.imu_frequency},
          {"offset_range_s", c.offset_range},
          {"seed", c.seed},
          {"harmonics", c.harmonics},
          {"initial_range", {c.initial_min, c.initial_max}},
          {"calf_share", c.calf_share},
          {"retract_to_limits", c.retract_to_limits},
          {"restart_on_stall", c.restart_on_stall}};
}

OptimizerConfig optimizer_config_from_json(const nlohmann::json& doc) {
  OptimizerConfig c;
  c.kappa_objective = doc.value("kappa_objective", c.kappa_objective);
  c.max_iterations = doc.value("max_iterations", c.max_iterations);
  c.step_size = doc.value("step_size", c.step_size);
  c.fd_epsilon = doc.value("fd_epsilon", c.fd_epsilon);
  if (doc.contains("penalty_weights")) {
    c.penalty_weights = get_field<std::array<double, kNumJoints>>(doc, "penalty_weights");
  }
  c.imu_frequency = doc.value("imu_frequency_hz", c.imu_frequency);
  c.offset_range = doc.value("offset_range_s", c.offset_range);
  c.seed = doc.value("seed", c.seed);
  c.harmonics = doc.value("harmonics", c.harmonics);
  if (doc.contains("initial_range")) {
    const auto r = get_field<std::vector<double>>(doc, "initial_range");
    if (r.size() != 2) throw Error(ErrorCode::kIo, "initial_range needs [min, max]");
    c.initial_min = r[0];
    c.initial_max = r[1];
  }
  c.calf_share = doc.value("calf_share", c.calf_share);
  c.retract_to_limits = doc.value("retract_to_limits", c.retract_to_limits);
  c.restart_on_stall = doc.value("restart_on_stall", c.restart_on_stall);
  c.validate();
  return c;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace footcal
