#include <gtest/gtest.h>

#include <sstream>

#include "footcal/error.hpp"
#include "footcal/io.hpp"

namespace footcal {
namespace {

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Io, TrajectoryCsvRoundTrip) {
  const BasisSpec spec = BasisSpec::for_offset_range(0.25, {1.0, -0.2}, {0.7, 0.1});
  const JointTrajectory t = eval_basis(spec, make_grid(0.0, 0.002, 100));
  std::stringstream ss;
  write_trajectory_csv(ss, t);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')),
            "t,theta_hip,theta_thigh,theta_calf,dtheta_hip,dtheta_thigh,dtheta_calf");
  const JointTrajectory back = read_trajectory_csv(ss);
  EXPECT_EQ(back.time, t.time);
  EXPECT_EQ(back.angle, t.angle);
  EXPECT_EQ(back.rate, t.rate);
}

TEST(Io, MeasurementCsvRoundTrip) {
  AngularVelocitySeries s;
  s.time = make_grid(0.0, 0.002, 10);
  for (std::size_t i = 0; i < 10; ++i) s.samples.emplace_back(0.1 * i, -0.3, 1e-9 * i);
  s.frame = Frame::kFootImu;
  std::stringstream ss;
  write_measurement_csv(ss, s);
  const AngularVelocitySeries back = read_measurement_csv(ss);
  EXPECT_EQ(back.frame, Frame::kFootImu);
  EXPECT_EQ(back.samples, s.samples);
}

TEST(Io, MalformedCsvIsIoError) {
  std::stringstream bad_header("t,x,y,z\n0,1,2,3\n");
  EXPECT_THROW(read_measurement_csv(bad_header), Error);
  std::stringstream bad_number("t,wx,wy,wz,frame\n0,1,abc,3,FootIMU\n0.002,1,2,3,FootIMU\n");
  try {
    read_measurement_csv(bad_number);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  std::stringstream mixed("t,wx,wy,wz,frame\n0,1,2,3,FootIMU\n0.002,1,2,3,FootKinematic\n");
  EXPECT_THROW(read_measurement_csv(mixed), Error);
}

TEST(Io, TruthJson) {
  const GroundTruth t = GroundTruth::from_euler_deg({10.0, 20.0, -30.0}, 0.042);
  const GroundTruth back = truth_from_json(truth_to_json(t));
  EXPECT_LT((back.rotation_f_from_i - t.rotation_f_from_i).norm(), 1e-12);
  EXPECT_EQ(back.time_offset, 0.042);
  EXPECT_THROW(truth_from_json(nlohmann::json{{"t_d_s", 0.0}}), Error);
}

TEST(Io, OptimizationJsonRoundTrip) {
  OptimizationResult r;
  r.spec = BasisSpec::for_offset_range(0.25, {1.0, 2.0}, {3.0, 4.0});
  r.spec.calf_share = 0.2;
  r.kappa_history = {5.0, 2.0};
  const nlohmann::json doc = optimization_to_json(r);
  for (const char* key : {"A", "B", "f", "T", "N", "rho", "kappa_final", "iterations", "kappa_history"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  const BasisSpec back = basis_from_json(doc);
  EXPECT_EQ(back.a, r.spec.a);
  EXPECT_EQ(back.b, r.spec.b);
  EXPECT_EQ(back.calf_share, 0.2);
  nlohmann::json wrong = doc;
  wrong["N"] = 3;
  EXPECT_THROW(basis_from_json(wrong), Error);
}

TEST(Io, ConfigAndGeometryJson) {
  OptimizerConfig c;
  c.seed = 9;
  c.penalty_weights = {1.0, 2.0, 3.0};
  const OptimizerConfig back = optimizer_config_from_json(optimizer_config_to_json(c));
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.penalty_weights, c.penalty_weights);
  LegGeometry g;
  g.limit(Joint::kCalf) = {-2.0, -1.0};
  EXPECT_EQ(geometry_from_json(geometry_to_json(g)).limit(Joint::kCalf).upper, -1.0);
  EXPECT_THROW(optimizer_config_from_json(nlohmann::json{{"step_size", -1.0}}), Error);
}

TEST(Io, CalibrationJsonFields) {
  CalibrationResult r;
  r.scan = {{-0.002, 0.5}, {0.0, 0.9}};
  const nlohmann::json doc = calibration_to_json(r);
  EXPECT_EQ(doc.at("rotation_matrix").size(), 9u);
  EXPECT_EQ(doc.at("scan").size(), 2u);
  EXPECT_EQ(doc.at("euler_deg").size(), 3u);
}

}  // namespace
}  // namespace footcal
