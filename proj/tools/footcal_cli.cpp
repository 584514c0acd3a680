#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "footcal/covariance.hpp"
#include "footcal/error.hpp"
#include "footcal/experiment.hpp"
#include "footcal/io.hpp"

namespace fc = footcal;
using nlohmann::json;

namespace {

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    fc::write_text_file(out, doc.dump(2) + "\n");
  }
}

fc::JointTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fc::Error(fc::ErrorCode::kIo, "cannot open " + path);
  return fc::read_trajectory_csv(in);
}

fc::AngularVelocitySeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fc::Error(fc::ErrorCode::kIo, "cannot open " + path);
  return fc::read_measurement_csv(in);
}

std::string series_text(const fc::AngularVelocitySeries& s) {
  std::ostringstream os;
  fc::write_measurement_csv(os, s);
  return os.str();
}

struct OptimizeArgs {
  std::string config;
  std::string geometry;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_optimize(const OptimizeArgs& args) {
  fc::OptimizerConfig config;
  if (!args.config.empty()) config = fc::optimizer_config_from_json(fc::read_json_file(args.config));
  if (args.seed) config.seed = *args.seed;
  fc::LegGeometry geometry;
  if (!args.geometry.empty()) geometry = fc::geometry_from_json(fc::read_json_file(args.geometry));

  const fc::OptimizationResult result =
      fc::optimize(fc::random_initial_spec(config, geometry), config, geometry);
  if (args.out.empty()) {
    emit(fc::optimization_to_json(result), "");
  } else {
    std::filesystem::create_directories(args.out);
    emit(fc::optimization_to_json(result), (std::filesystem::path(args.out) / "basis.json").string());
    std::ostringstream os;
    fc::write_trajectory_csv(os, result.trajectory);
    fc::write_text_file(std::filesystem::path(args.out) / "trajectory.csv", os.str());
  }
  return result.converged ? 0 : 3;
}

struct SimulateArgs {
  std::string trajectory;
  std::string truth;
  std::string geometry;
  double noise = 0.0;
  double rate = 500.0;
  std::uint64_t seed = 1;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  fc::LegGeometry geometry;
  if (!args.geometry.empty()) geometry = fc::geometry_from_json(fc::read_json_file(args.geometry));
  const fc::GroundTruth truth = fc::truth_from_json(fc::read_json_file(args.truth));
  const fc::AngularVelocitySeries foot =
      fc::trajectory_to_foot_velocity(geometry, load_trajectory(args.trajectory));
  const fc::AngularVelocitySeries imu =
      fc::simulate_imu(foot, truth, fc::NoiseModel{args.noise, args.rate, args.seed});
  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);
  fc::write_text_file(dir / "foot.csv", series_text(foot));
  fc::write_text_file(dir / "imu.csv", series_text(imu));
  fc::write_text_file(dir / "truth.json", fc::truth_to_json(truth).dump(2) + "\n");
  return 0;
}

struct CalibrateArgs {
  std::string imu;
  std::string foot;
  double range = 0.25;
  double step = 0.0;
  bool literal_inverse = false;
  std::string out;
};

int run_calibrate(const CalibrateArgs& args) {
  fc::CalibrationOptions options;
  options.search.range = args.range;
  options.search.step = args.step;
  if (args.literal_inverse) options.convention = fc::RotationConvention::kLiteralInverse;
  const fc::CalibrationResult result =
      fc::calibrate(load_series(args.imu), load_series(args.foot), options);
  emit(fc::calibration_to_json(result), args.out);
  return 0;
}

struct MatrixArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> motions;
  std::vector<double> noise;
  std::optional<int> runs;
  std::string out = "results";
};

int run_matrix(const MatrixArgs& args) {
  fc::ExperimentConfig config = args.config.empty()
                                    ? fc::default_experiment(args.seed.value_or(2024))
                                    : fc::experiment_from_json(fc::read_json_file(args.config));
  if (!args.config.empty() && args.seed) {
    throw fc::Error(fc::ErrorCode::kDomain, "--seed selects the default truth draw; put it in the config instead");
  }
  if (!args.motions.empty()) {
    config.motions.clear();
    for (const auto& m : args.motions) config.motions.push_back(fc::motion_from_string(m));
  }
  if (!args.noise.empty()) config.noise_densities = args.noise;
  if (args.runs) {
    config.seeds.clear();
    for (int s = 1; s <= *args.runs; ++s) config.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  config.output_dir = args.out;
  const fc::MatrixReport report = fc::run_matrix(config);
  std::cout << fc::summary_to_csv(report.summary);
  return 0;
}

struct TheoremArgs {
  int specs = 50;
  int max_harmonics = 3;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;
  std::string out;
};

int run_theorem_check(const TheoremArgs& args) {
  std::mt19937_64 rng(args.seed);
  std::uniform_int_distribution<int> harmonics(1, args.max_harmonics);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  std::uniform_real_distribution<double> range(0.05, 0.5);

  json cases = json::array();
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < args.specs; ++i) {
    const int n = harmonics(rng);
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = coeff(rng);
    for (auto& v : b) v = coeff(rng);
    // Snap the range so the period T = 8 range spans a whole number of samples.
    constexpr double kRate = 500.0;
    const double t_r = std::round(range(rng) * 8.0 * kRate) / (8.0 * kRate);
    const fc::BasisSpec spec = fc::BasisSpec::for_offset_range(t_r, a, b);
    const auto grid = fc::one_period_grid(spec.period, kRate);
    const auto traj = fc::eval_basis(spec, grid);
    const Eigen::Matrix3d s = fc::covariance_ff(fc::trajectory_to_foot_velocity({}, traj));
    const double scale = s.diagonal().cwiseAbs().maxCoeff();
    double off = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (r != c) off = std::max(off, std::abs(s(r, c)));
      }
    }
    const double rel = scale > 0.0 ? off / scale : 0.0;
    const bool ok = rel <= args.tolerance;
    if (!ok) ++violations;
    worst = std::max(worst, rel);
    cases.push_back({{"N", n}, {"A", a}, {"B", b}, {"f", spec.frequency},
                     {"max_rel_offdiag", rel}, {"diagonal", ok}});
  }
  emit({{"specs", args.specs}, {"tolerance", args.tolerance}, {"violations", violations},
        {"worst_rel_offdiag", worst}, {"cases", cases}},
       args.out);
  return violations == 0 ? 0 : 4;
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foot IMU extrinsic calibration toolkit"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Optimize an excitation trajectory for one leg");
  optimize->add_option("--config", opt.config, "Optimizer config JSON");
  optimize->add_option("--geometry", opt.geometry, "Leg geometry JSON");
  optimize->add_option("--seed", opt.seed, "Initialization seed");
  optimize->add_option("--out", opt.out, "Output directory (basis.json, trajectory.csv)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate foot IMU readings for a trajectory");
  simulate->add_option("--trajectory", sim.trajectory, "Joint trajectory CSV")->required();
  simulate->add_option("--truth", sim.truth, "Ground-truth JSON {euler_deg, t_d_s}")->required();
  simulate->add_option("--geometry", sim.geometry, "Leg geometry JSON");
  simulate->add_option("--noise", sim.noise, "Gyro noise density, deg/s/sqrt(Hz)");
  simulate->add_option("--rate", sim.rate, "Sample rate, Hz");
  simulate->add_option("--seed", sim.seed, "Noise seed");
  simulate->add_option("--out", sim.out, "Output directory")->required();

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate rotation and time offset");
  calibrate->add_option("--imu", cal.imu, "IMU measurement CSV")->required();
  calibrate->add_option("--foot", cal.foot, "Kinematic foot measurement CSV")->required();
  calibrate->add_option("--range", cal.range, "Offset search range, s");
  calibrate->add_option("--step", cal.step, "Offset search step, s (0: sample interval)");
  calibrate->add_flag("--literal-inverse", cal.literal_inverse, "Report the transposed rotation");
  calibrate->add_option("--out", cal.out, "Output JSON (default stdout)");

  MatrixArgs mat;
  auto* matrix = app.add_subcommand("matrix", "Run the comparison experiment");
  matrix->add_option("--config", mat.config, "Experiment config JSON");
  matrix->add_option("--seed", mat.seed, "Truth seed for the default experiment");
  matrix->add_option("--motion", mat.motions, "Restrict to motions (A2I, Walk, Spin, Wave)")->delimiter(',');
  matrix->add_option("--noise", mat.noise, "Restrict to noise densities")->delimiter(',');
  matrix->add_option("--runs", mat.runs, "Number of noise seeds");
  matrix->add_option("--out", mat.out, "Output directory");

  TheoremArgs thm;
  auto* theorem = app.add_subcommand("theorem-check", "Check diagonality of random harmonic specs");
  theorem->add_option("--specs", thm.specs, "Number of random specs");
  theorem->add_option("--max-harmonics", thm.max_harmonics, "Largest N drawn");
  theorem->add_option("--seed", thm.seed, "Draw seed");
  theorem->add_option("--tolerance", thm.tolerance, "Relative off-diagonal tolerance");
  theorem->add_option("--out", thm.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*optimize) return run_optimize(opt);
    if (*simulate) return run_simulate(sim);
    if (*calibrate) return run_calibrate(cal);
    if (*matrix) return run_matrix(mat);
    if (*theorem) return run_theorem_check(thm);
  } catch (const fc::Error& e) {
    print_error(std::string(fc::to_string(e.code())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
