#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "footcal/error.hpp"
#include "footcal/experiment.hpp"
#include "footcal/rotation.hpp"
#include "oracles.hpp"

namespace footcal {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("footcal_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(RotationError, Examples) {
  const Eigen::Vector3d truth(12.0, -30.0, 150.0);
  EXPECT_NEAR(rotation_error(rotation_from_euler_deg(truth), truth).degrees, 0.0, 1e-9);
  const RotationError yaw = rotation_error(rotation_from_euler_deg({0.0, 0.0, 10.0}), Eigen::Vector3d::Zero());
  EXPECT_NEAR(yaw.degrees, 10.0, 1e-12);
  EXPECT_FALSE(yaw.gimbal_lock);
}

TEST(RotationError, MatchesComponentOracle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  std::uniform_real_distribution<double> p(-85.0, 85.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d truth(u(rng), p(rng), u(rng));
    const Eigen::Matrix3d est = oracle::euler_matrix(u(rng), p(rng), u(rng));
    const RotationError e = rotation_error(est, truth);
    ASSERT_FALSE(e.gimbal_lock);
    EXPECT_NEAR(e.degrees, oracle::euler_error_deg(est, truth), 1e-9);
  }
}

TEST(RotationError, WrapsAcrossPlusMinus180) {
  const RotationError e = rotation_error(rotation_from_euler_deg({179.0, 0.0, 0.0}), {-179.0, 0.0, 0.0});
  EXPECT_NEAR(e.degrees, 2.0, 1e-9);
}

TEST(RotationError, GimbalLockFallsBackToGeodesic) {
  const RotationError e =
      rotation_error(rotation_from_euler_deg({10.0, 89.9, 0.0}), {0.0, 89.9, 10.0});
  EXPECT_TRUE(e.gimbal_lock);
  EXPECT_DOUBLE_EQ(e.degrees, e.geodesic_deg);
}

TEST(Median, FiniteOnly) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_EQ(median({std::nan(""), 5.0}), 5.0);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(CellSeed, DistinctAndStable) {
  const auto a = cell_seed(1, FootId::kFL, Motion::kA2I, 0.03);
  EXPECT_EQ(a, cell_seed(1, FootId::kFL, Motion::kA2I, 0.03));
  EXPECT_NE(a, cell_seed(2, FootId::kFL, Motion::kA2I, 0.03));
  EXPECT_NE(a, cell_seed(1, FootId::kFR, Motion::kA2I, 0.03));
  EXPECT_NE(a, cell_seed(1, FootId::kFL, Motion::kWalk, 0.03));
  EXPECT_NE(a, cell_seed(1, FootId::kFL, Motion::kA2I, 0.06));
}

TEST(Names, RoundTrip) {
  for (Motion m : {Motion::kA2I, Motion::kWalk, Motion::kSpin, Motion::kWave}) {
    EXPECT_EQ(motion_from_string(to_string(m)), m);
  }
  for (FootId f : {FootId::kFL, FootId::kFR, FootId::kRL, FootId::kRR}) {
    EXPECT_EQ(foot_from_string(to_string(f)), f);
  }
  EXPECT_THROW(motion_from_string("Trot"), Error);
}

TEST(DefaultExperiment, Shape) {
  const ExperimentConfig c = default_experiment();
  EXPECT_EQ(c.feet.size(), 4u);
  EXPECT_EQ(c.motions.size(), 4u);
  EXPECT_EQ(c.noise_densities, (std::vector<double>{0.006, 0.03, 0.06}));
  EXPECT_EQ(c.seeds.size(), 20u);
  for (const auto& f : c.feet) EXPECT_LE(std::abs(f.truth.time_offset), 0.1);
  EXPECT_NO_THROW(c.validate());
}

TEST(DefaultExperiment, ConfigJsonRoundTrip) {
  ExperimentConfig c = default_experiment(5);
  c.seeds = {3, 4};
  c.motions = {Motion::kWave};
  const ExperimentConfig back = experiment_from_json(experiment_to_json(c));
  ASSERT_EQ(back.feet.size(), c.feet.size());
  for (std::size_t i = 0; i < c.feet.size(); ++i) {
    EXPECT_LT((back.feet[i].truth.rotation_f_from_i - c.feet[i].truth.rotation_f_from_i).norm(), 1e-12);
    EXPECT_EQ(back.feet[i].truth.time_offset, c.feet[i].truth.time_offset);
  }
  EXPECT_EQ(back.seeds, c.seeds);
  EXPECT_EQ(back.motions, c.motions);
}

TEST(RunMatrix, NoiselessA2IRoundTrip) {
  ExperimentConfig c = default_experiment();
  c.motions = {Motion::kA2I};
  c.noise_densities = {0.0};
  c.seeds = {1};
  // Offsets on the sample grid need no interpolation, so recovery is exact.
  const double dt = 1.0 / c.optimizer.imu_frequency;
  for (auto& foot : c.feet) foot.truth.time_offset = dt * std::round(foot.truth.time_offset / dt);
  const MatrixReport r = run_matrix(c);
  ASSERT_EQ(r.rows.size(), 4u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const ReportRow& row = r.rows[i];
    ASSERT_TRUE(row.ok()) << row.error;
    EXPECT_LE(row.re_deg, 1e-4);
    EXPECT_NEAR(row.td_estimate_s, c.feet[i].truth.time_offset, 1e-9);
  }
}

TEST(RunMatrix, NoiselessOffGridOffsetsStayClose) {
  ExperimentConfig c = default_experiment();
  c.motions = {Motion::kA2I};
  c.noise_densities = {0.0};
  c.seeds = {1};
  const MatrixReport r = run_matrix(c);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    ASSERT_TRUE(r.rows[i].ok()) << r.rows[i].error;
    EXPECT_LE(r.rows[i].re_deg, 0.1);
    EXPECT_NEAR(r.rows[i].td_estimate_s, c.feet[i].truth.time_offset, 1e-3);
  }
}

TEST(RunMatrix, RowCountAndFiles) {
  ExperimentConfig c = default_experiment();
  c.feet.resize(2);
  c.noise_densities = {0.03};
  c.seeds = {1, 2};
  c.output_dir = scratch("files");
  const MatrixReport r = run_matrix(c);
  EXPECT_EQ(r.rows.size(), 2u * 4u * 1u * 2u);
  EXPECT_EQ(r.summary.size(), 4u);
  for (const char* f : {"rows.csv", "summary.csv", "summary.json", "timing.csv", "basis_FL.json",
                        "basis_FR.json", "scans/FL_A2I_0.029999999999999999_1.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(c.output_dir / f)) << f;
  }
  std::ifstream rows(c.output_dir / "rows.csv");
  std::string line;
  std::size_t count = 0;
  while (std::getline(rows, line)) ++count;
  EXPECT_EQ(count, r.rows.size() + 1);
}

TEST(RunMatrix, ReportsAreByteIdentical) {
  ExperimentConfig c = default_experiment();
  c.feet.resize(1);
  c.noise_densities = {0.06};
  c.seeds = {1, 2};
  c.output_dir = scratch("det_a");
  run_matrix(c);
  ExperimentConfig d = c;
  d.output_dir = scratch("det_b");
  run_matrix(d);
  for (const char* f : {"rows.csv", "summary.csv", "summary.json", "basis_FL.json"}) {
    EXPECT_EQ(slurp(c.output_dir / f), slurp(d.output_dir / f)) << f;
  }
}

TEST(RunMatrix, CellFailureIsRecordedNotThrown) {
  ExperimentConfig c = default_experiment();
  c.feet.resize(1);
  c.motions = {Motion::kWave};
  c.noise_densities = {0.0};
  c.seeds = {1};
  c.duration = 0.5;  // too short for the offset search
  const MatrixReport r = run_matrix(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.rows[0].ok());
  EXPECT_EQ(r.summary[0].failures, 1u);
  EXPECT_NE(row_to_csv(r.rows[0]).find("domain_error"), std::string::npos);
}

TEST(Summarize, MediansPerCell) {
  std::vector<ReportRow> rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].cn = 1.0 + i;
    rows[i].cc = 0.99;
    rows[i].re_deg = 10.0 * i;
    rows[i].td_error_ms = -1.0 * i;
  }
  rows[2].error = "x";
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].runs, 3u);
  EXPECT_EQ(s[0].failures, 1u);
  EXPECT_EQ(s[0].median_cn, 1.5);
  EXPECT_EQ(s[0].median_re_deg, 5.0);
  EXPECT_EQ(s[0].median_abs_td_error_ms, 0.5);
}

TEST(Mounting, PresetAnglesRoundTrip) {
  const auto feet = go2_mounting_preset();
  ASSERT_EQ(feet.size(), 4u);
  const Eigen::Vector3d e = feet[2].truth.euler_deg();
  EXPECT_NEAR(e.x(), 56.0, 1e-9);
  EXPECT_NEAR(e.y(), -32.0, 1e-9);
  EXPECT_NEAR(e.z(), -129.0, 1e-9);
}

}  // namespace
}  // namespace footcal
