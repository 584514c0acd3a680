#include "footcal/experiment.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "footcal/error.hpp"
#include "footcal/io.hpp"
#include "footcal/rotation.hpp"

namespace footcal {

namespace {

constexpr std::array<Motion, 4> kAllMotions = {Motion::kA2I, Motion::kWalk, Motion::kSpin,
                                               Motion::kWave};
constexpr std::array<FootId, 4> kAllFeet = {FootId::kFL, FootId::kFR, FootId::kRL, FootId::kRR};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GaitKind gait_for(Motion motion) {
  switch (motion) {
    case Motion::kWalk: return GaitKind::kWalk;
    case Motion::kSpin: return GaitKind::kSpin;
    default: return GaitKind::kWave;
  }
}

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

std::string density_tag(double density) { return format_double(density); }

JointTrajectory add_encoder_noise(JointTrajectory traj, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (auto& angles : traj.angle) {
    for (double& a : angles) a += gauss(rng);
  }
  return traj;
}

}  // namespace

std::string_view to_string(Motion motion) {
  switch (motion) {
    case Motion::kA2I: return "A2I";
    case Motion::kWalk: return "Walk";
    case Motion::kSpin: return "Spin";
    case Motion::kWave: return "Wave";
  }
  return "unknown";
}

std::string_view to_string(FootId foot) {
  switch (foot) {
    case FootId::kFL: return "FL";
    case FootId::kFR: return "FR";
    case FootId::kRL: return "RL";
    case FootId::kRR: return "RR";
  }
  return "unknown";
}

Motion motion_from_string(std::string_view name) {
  for (Motion m : kAllMotions) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kDomain, "unknown motion '" + std::string(name) + "'");
}

FootId foot_from_string(std::string_view name) {
  for (FootId f : kAllFeet) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::kDomain, "unknown foot '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (feet.empty() || motions.empty() || noise_densities.empty() || seeds.empty()) {
    throw Error(ErrorCode::kDomain,
                "experiment needs at least one foot, motion, noise level and seed");
  }
  optimizer.validate();
  for (const auto& foot : feet) {
    foot.geometry.validate();
    foot.truth.validate(optimizer.offset_range);
  }
  for (double d : noise_densities) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorCode::kDomain, "noise density must be >= 0");
  }
  if (!(duration > 0.0) || !(encoder_noise >= 0.0)) {
    throw Error(ErrorCode::kDomain, "duration must be positive and encoder noise >= 0");
  }
}

ExperimentConfig default_experiment(std::uint64_t truth_seed) {
  ExperimentConfig config;
  std::mt19937_64 rng(truth_seed);
  std::uniform_real_distribution<double> offset(-0.1, 0.1);
  for (FootId id : kAllFeet) {
    FootSetup foot;
    foot.id = id;
    foot.truth.rotation_f_from_i = random_rotation(rng);
    foot.truth.time_offset = offset(rng);
    config.feet.push_back(foot);
  }
  config.noise_densities = {0.006, 0.03, 0.06};
  config.motions = {kAllMotions.begin(), kAllMotions.end()};
  for (std::uint64_t s = 1; s <= 20; ++s) config.seeds.push_back(s);
  return config;
}

std::vector<FootSetup> go2_mounting_preset() {
  const std::array<Eigen::Vector3d, 4> euler = {
      Eigen::Vector3d(104, 17, 21), Eigen::Vector3d(136, -11, 55),
      Eigen::Vector3d(56, -32, -129), Eigen::Vector3d(92, -21, 115)};
  std::vector<FootSetup> feet;
  for (std::size_t i = 0; i < kAllFeet.size(); ++i) {
    FootSetup foot;
    foot.id = kAllFeet[i];
    foot.truth = GroundTruth::from_euler_deg(euler[i], 0.0);
    feet.push_back(foot);
  }
  return feet;
}

ExperimentConfig experiment_from_json(const nlohmann::json& doc) {
  ExperimentConfig config = default_experiment(doc.value("truth_seed", std::uint64_t{2024}));
  try {
    if (doc.value("preset", std::string()) == "go2_mounting") config.feet = go2_mounting_preset();
    if (doc.contains("optimizer")) config.optimizer = optimizer_config_from_json(doc.at("optimizer"));
    if (doc.contains("geometry")) {
      const LegGeometry g = geometry_from_json(doc.at("geometry"));
      for (auto& foot : config.feet) foot.geometry = g;
    }
    if (doc.contains("feet")) {
      config.feet.clear();
      for (const auto& f : doc.at("feet")) {
        FootSetup foot;
        foot.id = foot_from_string(f.at("id").get<std::string>());
        foot.truth = truth_from_json(f);
        if (f.contains("geometry")) foot.geometry = geometry_from_json(f.at("geometry"));
        config.feet.push_back(foot);
      }
    }
    if (doc.contains("noise_densities")) {
      config.noise_densities = doc.at("noise_densities").get<std::vector<double>>();
    }
    if (doc.contains("motions")) {
      config.motions.clear();
      for (const auto& m : doc.at("motions")) config.motions.push_back(motion_from_string(m.get<std::string>()));
    }
    if (doc.contains("seeds")) config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
    config.duration = doc.value("duration_s", config.duration);
    config.encoder_noise = doc.value("encoder_noise_rad", config.encoder_noise);
    config.write_scans = doc.value("write_scans", config.write_scans);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("experiment config: ") + e.what());
  }
  config.validate();
  return config;
}

nlohmann::json experiment_to_json(const ExperimentConfig& config) {
  nlohmann::json feet = nlohmann::json::array();
  for (const auto& foot : config.feet) {
    nlohmann::json f = truth_to_json(foot.truth);
    f["id"] = std::string(to_string(foot.id));
    f["geometry"] = geometry_to_json(foot.geometry);
    feet.push_back(f);
  }
  nlohmann::json motions = nlohmann::json::array();
  for (Motion m : config.motions) motions.push_back(std::string(to_string(m)));
  return {{"feet", feet},
          {"noise_densities", config.noise_densities},
          {"motions", motions},
          {"optimizer", optimizer_config_to_json(config.optimizer)},
          {"seeds", config.seeds},
          {"duration_s", config.duration},
          {"encoder_noise_rad", config.encoder_noise},
          {"write_scans", config.write_scans}};
}

RotationError rotation_error(const Eigen::Matrix3d& estimate, const Eigen::Vector3d& truth_euler_deg) {
  if (!is_rotation(estimate, 1e-6)) throw Error(ErrorCode::kDomain, "estimate is not a rotation");
  const Eigen::Matrix3d truth = rotation_from_euler_deg(truth_euler_deg);
  const EulerExtraction est = euler_from_rotation(estimate);
  const EulerExtraction gt = euler_from_rotation(truth);

  RotationError out;
  out.geodesic_deg = geodesic_angle_deg(estimate, truth);
  out.gimbal_lock = est.gimbal_lock || gt.gimbal_lock;
  if (out.gimbal_lock) {
    out.degrees = out.geodesic_deg;
    return out;
  }
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = wrap_deg(est.euler_deg(i) - truth_euler_deg(i));
    sum += d * d;
  }
  out.degrees = std::sqrt(sum);
  return out;
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::uint64_t cell_seed(std::uint64_t seed, FootId foot, Motion motion, double density) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(foot));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(motion) << 8));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(density));
  return h;
}

OptimizerConfig foot_optimizer_config(const OptimizerConfig& base, FootId foot) {
  OptimizerConfig c = base;
  c.seed = base.seed + static_cast<std::uint64_t>(foot);
  return c;
}

std::string rows_csv_header() {
  return "foot,motion,density,seed,cn,cc,re_deg,geodesic_deg,gimbal_lock,td_estimate_s,"
         "td_error_ms,error\n";
}

std::string row_to_csv(const ReportRow& r) {
  std::ostringstream os;
  os << to_string(r.foot) << ',' << to_string(r.motion) << ',' << format_double(r.density) << ','
     << r.seed << ',' << format_double(r.cn) << ',' << format_double(r.cc) << ','
     << format_double(r.re_deg) << ',' << format_double(r.geodesic_deg) << ','
     << (r.gimbal_lock ? 1 : 0) << ',' << format_double(r.td_estimate_s) << ','
     << format_double(r.td_error_ms) << ',' << sanitize(r.error) << '\n';
  return os.str();
}

std::vector<SummaryCell> summarize(const std::vector<ReportRow>& rows) {
  std::map<std::pair<Motion, double>, std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) groups[{r.motion, r.density}].push_back(&r);

  std::vector<SummaryCell> summary;
  for (const auto& [key, members] : groups) {
    SummaryCell cell;
    cell.motion = key.first;
    cell.density = key.second;
    cell.runs = members.size();
    std::vector<double> cn, cc, re, td;
    for (const ReportRow* r : members) {
      if (!r->ok()) {
        ++cell.failures;
        continue;
      }
      cn.push_back(r->cn);
      cc.push_back(r->cc);
      re.push_back(r->re_deg);
      td.push_back(std::abs(r->td_error_ms));
    }
    cell.median_cn = median(cn);
    cell.median_cc = median(cc);
    cell.median_re_deg = median(re);
    cell.median_abs_td_error_ms = median(td);
    summary.push_back(cell);
  }
  return summary;
}

std::string summary_to_csv(const std::vector<SummaryCell>& summary) {
  std::ostringstream os;
  os << "motion,density,runs,failures,median_cn,median_cc,median_re_deg,median_abs_td_error_ms\n";
  for (const auto& c : summary) {
    os << to_string(c.motion) << ',' << format_double(c.density) << ',' << c.runs << ','
       << c.failures << ',' << format_double(c.median_cn) << ',' << format_double(c.median_cc)
       << ',' << format_double(c.median_re_deg) << ',' << format_double(c.median_abs_td_error_ms)
       << '\n';
  }
  return os.str();
}

nlohmann::json summary_to_json(const std::vector<SummaryCell>& summary) {
  const auto number = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : summary) {
    cells.push_back({{"motion", std::string(to_string(c.motion))},
                     {"density", c.density},
                     {"runs", c.runs},
                     {"failures", c.failures},
                     {"median_cn", number(c.median_cn)},
                     {"median_cc", number(c.median_cc)},
                     {"median_re_deg", number(c.median_re_deg)},
                     {"median_abs_td_error_ms", number(c.median_abs_td_error_ms)}});
  }
  return {{"summary", cells}};
}

MatrixReport run_matrix(const ExperimentConfig& config) {
  config.validate();
  const double rate = config.optimizer.imu_frequency;
  const auto samples = static_cast<std::size_t>(std::llround(config.duration * rate));
  const std::vector<double> grid = make_grid(0.0, 1.0 / rate, samples);

  std::vector<Motion> motions = config.motions;
  std::sort(motions.begin(), motions.end());
  motions.erase(std::unique(motions.begin(), motions.end()), motions.end());
  std::vector<double> densities = config.noise_densities;
  std::sort(densities.begin(), densities.end());
  densities.erase(std::unique(densities.begin(), densities.end()), densities.end());
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  const bool write = !config.output_dir.empty();
  std::ofstream rows_out;
  std::ofstream timing_out;
  if (write) {
    std::filesystem::create_directories(config.output_dir);
    if (config.write_scans) std::filesystem::create_directories(config.output_dir / "scans");
    rows_out.open(config.output_dir / "rows.csv", std::ios::binary);
    timing_out.open(config.output_dir / "timing.csv", std::ios::binary);
    if (!rows_out || !timing_out) {
      throw Error(ErrorCode::kIo, "cannot write reports to " + config.output_dir.string());
    }
    rows_out << rows_csv_header();
    timing_out << "foot,motion,density,seed,wall_time_s\n";
  }

  MatrixReport report;
  const bool wants_a2i = std::find(motions.begin(), motions.end(), Motion::kA2I) != motions.end();

  for (const FootSetup& foot : config.feet) {
    std::optional<JointTrajectory> a2i_trajectory;
    if (wants_a2i) {
      const OptimizerConfig opt_config = foot_optimizer_config(config.optimizer, foot.id);
      OptimizationResult opt =
          optimize(random_initial_spec(opt_config, foot.geometry), opt_config, foot.geometry);
      a2i_trajectory = eval_basis(opt.spec, grid);
      if (write) {
        write_text_file(config.output_dir / ("basis_" + std::string(to_string(foot.id)) + ".json"),
                        optimization_to_json(opt).dump(2) + "\n");
      }
      report.optimizations.push_back(std::move(opt));
    }

    for (Motion motion : motions) {
      std::optional<JointTrajectory> gait_trajectory;
      std::string build_error;
      if (motion != Motion::kA2I) {
        try {
          GaitParams params = GaitParams::defaults(gait_for(motion));
          params.duration = config.duration;
          params.sample_rate = rate;
          gait_trajectory = baseline_gait(gait_for(motion), params);
        } catch (const Error& e) {
          build_error = std::string(to_string(e.code())) + ": " + e.what();
        }
      }
      const JointTrajectory* trajectory =
          motion == Motion::kA2I ? &*a2i_trajectory : (gait_trajectory ? &*gait_trajectory : nullptr);

      for (double density : densities) {
        for (std::uint64_t seed : seeds) {
          const auto start = std::chrono::steady_clock::now();
          ReportRow row;
          row.foot = foot.id;
          row.motion = motion;
          row.density = density;
          row.seed = seed;
          CalibrationResult calib;
          try {
            if (trajectory == nullptr) throw Error(ErrorCode::kDomain, build_error);
            const std::uint64_t noise_seed = cell_seed(seed, foot.id, motion, density);
            const AngularVelocitySeries foot_true =
                trajectory_to_foot_velocity(foot.geometry, *trajectory);
            const AngularVelocitySeries imu =
                simulate_imu(foot_true, foot.truth, NoiseModel{density, rate, noise_seed});
            const AngularVelocitySeries foot_measured =
                config.encoder_noise > 0.0
                    ? trajectory_to_foot_velocity(
                          foot.geometry,
                          add_encoder_noise(*trajectory, config.encoder_noise, splitmix64(noise_seed)))
                    : foot_true;
            CalibrationOptions options;
            options.search.range = config.optimizer.offset_range;
            calib = calibrate(imu, foot_measured, options);

            const RotationError re = rotation_error(calib.rotation, foot.truth.euler_deg());
            row.cn = calib.condition_number;
            row.cc = calib.correlation;
            row.re_deg = re.degrees;
            row.geodesic_deg = re.geodesic_deg;
            row.gimbal_lock = re.gimbal_lock;
            row.td_estimate_s = calib.time_offset;
            row.td_error_ms = (calib.time_offset - foot.truth.time_offset) * 1e3;
          } catch (const Error& e) {
            row.error = std::string(to_string(e.code())) + ": " + e.what();
            row.cn = row.cc = row.re_deg = row.geodesic_deg = std::nan("");
            row.td_estimate_s = row.td_error_ms = std::nan("");
          }
          row.wall_time_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

          if (write) {
            rows_out << row_to_csv(row) << std::flush;
            timing_out << to_string(row.foot) << ',' << to_string(row.motion) << ','
                       << format_double(row.density) << ',' << row.seed << ','
                       << format_double(row.wall_time_s) << '\n';
            if (config.write_scans && row.ok()) {
              std::ostringstream scan;
              scan << "t_d,r\n";
              for (const auto& p : calib.scan) {
                scan << format_double(p.time_offset) << ',' << format_double(p.correlation) << '\n';
              }
              write_text_file(config.output_dir / "scans" /
                                  (std::string(to_string(foot.id)) + "_" +
                                   std::string(to_string(motion)) + "_" + density_tag(density) +
                                   "_" + std::to_string(seed) + ".csv"),
                              scan.str());
            }
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }

  report.summary = summarize(report.rows);
  if (write) {
    write_text_file(config.output_dir / "summary.csv", summary_to_csv(report.summary));
    write_text_file(config.output_dir / "summary.json", summary_to_json(report.summary).dump(2) + "\n");
  }
  return report;
}

}  // namespace footcal
