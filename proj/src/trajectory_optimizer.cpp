#include "footcal/trajectory_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "footcal/covariance.hpp"
#include "footcal/error.hpp"

namespace footcal {

namespace {

// Backtracking gives up once the step has been halved this many times.
constexpr int kMaxHalvings = 40;
// A run whose loss fell by less than kStallTolerance (relative) over the last
// kStallWindow accepted steps counts as stalled.
constexpr int kStallWindow = 20;
constexpr double kStallTolerance = 1e-3;

std::size_t period_samples(double period, double sample_rate) {
  // Tolerate T * f_imu landing a rounding error below an integer.
  return static_cast<std::size_t>(std::floor(period * sample_rate + 1e-9));
}

// Sample tables of sin(k f t) and cos(k f t) for one grid.
struct HarmonicTable {
  std::size_t harmonics = 0;
  std::size_t samples = 0;
  std::vector<double> sin_kft;  // [k * samples + n]
  std::vector<double> cos_kft;

  HarmonicTable(double frequency, std::size_t n_harmonics, std::span<const double> grid)
      : harmonics(n_harmonics), samples(grid.size()) {
    sin_kft.resize(harmonics * samples);
    cos_kft.resize(harmonics * samples);
    for (std::size_t k = 0; k < harmonics; ++k) {
      const double w = static_cast<double>(k + 1) * frequency;
      for (std::size_t n = 0; n < samples; ++n) {
        sin_kft[k * samples + n] = std::sin(w * grid[n]);
        cos_kft[k * samples + n] = std::cos(w * grid[n]);
      }
    }
  }
};

JointTrajectory eval_with_table(const BasisSpec& spec, const HarmonicTable& table,
                                std::span<const double> grid) {
  JointTrajectory traj = JointTrajectory::zeros(std::vector<double>(grid.begin(), grid.end()));
  auto& hip = traj.angle[0];
  auto& thigh = traj.angle[1];
  auto& calf = traj.angle[2];
  auto& hip_rate = traj.rate[0];
  auto& thigh_rate = traj.rate[1];
  auto& calf_rate = traj.rate[2];
  const double rho = spec.calf_share;
  const std::size_t samples = grid.size();

  for (std::size_t n = 0; n < samples; ++n) {
    double hip_v = 0.0;
    double hip_a = 0.0;
    double sum_v = 0.0;
    double sum_a = 0.0;
    for (std::size_t k = 0; k < spec.harmonics(); ++k) {
      const double kf = static_cast<double>(k + 1) * spec.frequency;
      const double s = table.sin_kft[k * samples + n];
      const double c = table.cos_kft[k * samples + n];
      hip_v += spec.a[k] * s;
      hip_a -= spec.a[k] / kf * c;
      sum_v += spec.b[k] * c;
      sum_a += spec.b[k] / kf * s;
    }
    hip[n] = spec.posture[0] + hip_a;
    hip_rate[n] = hip_v;
    thigh[n] = spec.posture[1] + (1.0 - rho) * sum_a;
    thigh_rate[n] = (1.0 - rho) * sum_v;
    calf[n] = spec.posture[2] + rho * sum_a;
    calf_rate[n] = rho * sum_v;
  }
  return traj;
}

// Shrink applied to an excursion that is wider than its limit interval.
constexpr double kRetractMargin = 1.0 - 1e-9;

// Motion of one joint about its posture over a period.
struct Excursion {
  double low = 0.0;
  double high = 0.0;
  bool violated = false;
  double scale = 1.0;

  double centered_posture(const JointLimit& limit, double applied_scale) const {
    return limit.midpoint() - applied_scale * 0.5 * (low + high);
  }
};

Excursion excursion(const std::vector<double>& angle, double posture, const JointLimit& limit) {
  const auto [lo, hi] = std::minmax_element(angle.begin(), angle.end());
  Excursion e;
  e.low = *lo - posture;
  e.high = *hi - posture;
  e.violated = !(limit.contains(*lo) && limit.contains(*hi));
  const double width = limit.upper - limit.lower;
  const double span = e.high - e.low;
  if (span > width) e.scale = width / span * kRetractMargin;
  return e;
}

// Loss over a fixed grid, reusing the harmonic table across evaluations.
class LossEvaluator {
 public:
  LossEvaluator(const BasisSpec& like, const OptimizerConfig& config, const LegGeometry& geometry)
      : config_(config),
        geometry_(geometry),
        grid_(one_period_grid(like.period, config.imu_frequency)),
        table_(like.frequency, like.harmonics(), grid_) {}

  LossTerms operator()(const BasisSpec& spec) const {
    const JointTrajectory traj = eval_with_table(spec, table_, grid_);
    const AngularVelocitySeries foot = trajectory_to_foot_velocity(geometry_, traj);
    LossTerms terms;
    terms.kappa = condition_number(covariance_ff(foot));
    terms.loss = terms.kappa;
    const auto report = joint_limit_report(traj, geometry_);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      if (!report[j].in_bounds) {
        terms.feasible = false;
        terms.penalties[j] = config_.penalty_weights[j] * report[j].range;
        terms.loss += terms.penalties[j];
      }
    }
    return terms;
  }

  BasisSpec retract(BasisSpec spec) const {
    const JointTrajectory traj = eval_with_table(spec, table_, grid_);
    std::array<Excursion, kNumJoints> ex;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      ex[j] = excursion(traj.angle[j], spec.posture[j], geometry_.limits[j]);
    }
    if (ex[0].violated) {
      for (double& v : spec.a) v *= ex[0].scale;
      spec.posture[0] = ex[0].centered_posture(geometry_.limits[0], ex[0].scale);
    }
    if (ex[1].violated || ex[2].violated) {
      double scale = 1.0;
      for (std::size_t j = 1; j < kNumJoints; ++j) {
        if (ex[j].violated) scale = std::min(scale, ex[j].scale);
      }
      for (double& v : spec.b) v *= scale;
      for (std::size_t j = 1; j < kNumJoints; ++j) {
        if (ex[j].violated) spec.posture[j] = ex[j].centered_posture(geometry_.limits[j], scale);
      }
    }
    return spec;
  }

  // With `retracted`, probes are retracted before scoring, so the gradient is
  // that of the continuous composite loss(retract(.)).
  std::vector<double> gradient(const BasisSpec& spec, double epsilon, bool retracted = false) const {
    const std::size_t n = spec.harmonics();
    std::vector<double> grad(2 * n);
    BasisSpec probe = spec;
    const auto score = [&](const BasisSpec& p) {
      return retracted ? (*this)(retract(p)).loss : (*this)(p).loss;
    };
    for (std::size_t i = 0; i < 2 * n; ++i) {
      double& coeff = i < n ? probe.a[i] : probe.b[i - n];
      const double saved = coeff;
      coeff = saved + epsilon;
      const double up = score(probe);
      coeff = saved - epsilon;
      const double down = score(probe);
      coeff = saved;
      grad[i] = (up - down) / (2.0 * epsilon);
    }
    return grad;
  }

 private:
  const OptimizerConfig& config_;
  const LegGeometry& geometry_;
  std::vector<double> grid_;
  HarmonicTable table_;
};

bool all_finite(const BasisSpec& spec) {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(spec.a.begin(), spec.a.end(), finite) &&
         std::all_of(spec.b.begin(), spec.b.end(), finite);
}

}  // namespace

BasisSpec BasisSpec::for_offset_range(double offset_range, std::vector<double> a,
                                      std::vector<double> b) {
  if (!(offset_range > 0.0) || !std::isfinite(offset_range)) {
    throw Error(ErrorCode::kDomain, "offset range must be positive");
  }
  BasisSpec spec;
  spec.a = std::move(a);
  spec.b = std::move(b);
  spec.frequency = std::numbers::pi / (4.0 * offset_range);
  spec.period = 8.0 * offset_range;
  return spec;
}

void BasisSpec::validate() const {
  if (a.empty()) throw Error(ErrorCode::kDomain, "basis needs at least one harmonic");
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDomain, "basis coefficient sets A and B differ in length");
  }
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw Error(ErrorCode::kDomain, "basis frequency must be positive");
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::kDomain, "basis period must be positive");
  }
  if (!(calf_share >= 0.0 && calf_share <= 1.0)) {
    throw Error(ErrorCode::kDomain, "calf share must lie in [0, 1]");
  }
  if (!all_finite(*this) || !std::all_of(posture.begin(), posture.end(),
                                         [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kDomain, "basis contains non-finite values");
  }
}

std::vector<double> Schedule::period_grid() const {
  const std::size_t n = time_grid.size() > 1 ? time_grid.size() - 1 : time_grid.size();
  return {time_grid.begin(), time_grid.begin() + static_cast<std::ptrdiff_t>(n)};
}

Schedule derive_schedule(double imu_frequency, double offset_range) {
  if (!(imu_frequency > 0.0) || !std::isfinite(imu_frequency)) {
    throw Error(ErrorCode::kDomain, "IMU frequency must be positive");
  }
  if (!(offset_range > 0.0) || !std::isfinite(offset_range)) {
    throw Error(ErrorCode::kDomain, "offset range must be positive");
  }
  Schedule s;
  s.frequency = std::numbers::pi / (4.0 * offset_range);
  s.period = 8.0 * offset_range;
  const std::size_t last = period_samples(s.period, imu_frequency);
  s.time_grid.resize(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    s.time_grid[i] = static_cast<double>(i) / imu_frequency;
  }
  return s;
}

std::vector<double> one_period_grid(double period, double sample_rate) {
  const std::size_t n = period_samples(period, sample_rate);
  if (n < 2) throw Error(ErrorCode::kDomain, "period shorter than two samples");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / sample_rate;
  return grid;
}

JointTrajectory eval_basis(const BasisSpec& spec, std::span<const double> time_grid) {
  spec.validate();
  const HarmonicTable table(spec.frequency, spec.harmonics(), time_grid);
  return eval_with_table(spec, table, time_grid);
}

void OptimizerConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!(kappa_objective >= 1.0)) throw Error(ErrorCode::kDomain, "kappa objective must be >= 1");
  if (max_iterations < 0) throw Error(ErrorCode::kDomain, "max iterations must be >= 0");
  if (!positive(step_size)) throw Error(ErrorCode::kDomain, "step size must be positive");
  if (!positive(fd_epsilon)) throw Error(ErrorCode::kDomain, "fd epsilon must be positive");
  if (!positive(imu_frequency)) throw Error(ErrorCode::kDomain, "IMU frequency must be positive");
  if (!positive(offset_range)) throw Error(ErrorCode::kDomain, "offset range must be positive");
  if (harmonics < 1) throw Error(ErrorCode::kDomain, "harmonic count must be >= 1");
  if (!(initial_min <= initial_max)) {
    throw Error(ErrorCode::kDomain, "initial coefficient range is empty");
  }
  if (!(calf_share >= 0.0 && calf_share <= 1.0)) {
    throw Error(ErrorCode::kDomain, "calf share must lie in [0, 1]");
  }
  for (double w : penalty_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kDomain, "penalty weights must be >= 0");
    }
  }
}

LossTerms trajectory_loss(const BasisSpec& spec, const OptimizerConfig& config,
                          const LegGeometry& geometry) {
  spec.validate();
  config.validate();
  return LossEvaluator(spec, config, geometry)(spec);
}

std::vector<double> loss_gradient(const BasisSpec& spec, const OptimizerConfig& config,
                                  const LegGeometry& geometry, double epsilon) {
  spec.validate();
  config.validate();
  return LossEvaluator(spec, config, geometry).gradient(spec, epsilon);
}

BasisSpec random_initial_spec(const OptimizerConfig& config, const LegGeometry& geometry) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> coeff(config.initial_min, config.initial_max);
  std::vector<double> a(static_cast<std::size_t>(config.harmonics));
  std::vector<double> b(a.size());
  for (double& v : a) v = coeff(rng);
  for (double& v : b) v = coeff(rng);
  BasisSpec spec = BasisSpec::for_offset_range(config.offset_range, std::move(a), std::move(b));
  spec.calf_share = config.calf_share;
  spec.posture = geometry.limit_midpoints();
  return spec;
}

BasisSpec retract_to_limits(const BasisSpec& spec, const LegGeometry& geometry, double sample_rate) {
  spec.validate();
  geometry.validate();
  OptimizerConfig config;
  config.imu_frequency = sample_rate;
  config.validate();
  return LossEvaluator(spec, config, geometry).retract(spec);
}

OptimizationResult optimize(const BasisSpec& initial, const OptimizerConfig& config,
                            const LegGeometry& geometry) {
  initial.validate();
  config.validate();
  geometry.validate();

  const LossEvaluator evaluate(initial, config, geometry);
  BasisSpec current = initial;
  LossTerms terms = evaluate(current);

  OptimizationResult result;
  result.kappa_history.push_back(terms.kappa);
  result.loss_history.push_back(terms.loss);

  BasisSpec best_feasible = current;
  LossTerms best_feasible_terms = terms;
  bool have_feasible = terms.feasible;
  double best_loss = terms.loss;

  std::mt19937_64 restart_rng(config.seed * 0x9e3779b97f4a7c15ULL + 1);
  std::uniform_real_distribution<double> coeff(config.initial_min, config.initial_max);
  std::vector<double> recent;  // loss after each accepted step since the last (re)start

  const std::size_t n = current.harmonics();
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (terms.feasible && terms.kappa < config.kappa_objective) break;

    const std::vector<double> grad =
        evaluate.gradient(current, config.fd_epsilon, config.retract_to_limits);
    double alpha = config.step_size;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings && !accepted; ++halving, alpha *= 0.5) {
      BasisSpec candidate = current;
      for (std::size_t i = 0; i < n; ++i) {
        candidate.a[i] -= alpha * grad[i];
        candidate.b[i] -= alpha * grad[n + i];
      }
      if (!all_finite(candidate)) continue;
      if (config.retract_to_limits) candidate = evaluate.retract(std::move(candidate));
      const LossTerms cand_terms = evaluate(candidate);
      if (!std::isfinite(cand_terms.loss) || !(cand_terms.loss < terms.loss)) continue;
      current = std::move(candidate);
      terms = cand_terms;
      accepted = true;
    }

    bool stalled = !accepted;
    if (accepted) {
      ++result.iterations;
      recent.push_back(terms.loss);
      const std::size_t w = static_cast<std::size_t>(kStallWindow);
      stalled = recent.size() > w &&
                recent[recent.size() - 1 - w] - terms.loss < kStallTolerance * terms.loss;
    }
    if (stalled) {
      if (!config.restart_on_stall) break;
      for (std::size_t i = 0; i < n; ++i) current.a[i] = coeff(restart_rng);
      for (std::size_t i = 0; i < n; ++i) current.b[i] = coeff(restart_rng);
      current.posture = geometry.limit_midpoints();
      terms = evaluate(current);
      recent.clear();
      ++result.restarts;
    }

    best_loss = std::min(best_loss, terms.loss);
    result.kappa_history.push_back(terms.kappa);
    result.loss_history.push_back(best_loss);
    if (terms.feasible && (!have_feasible || terms.loss <= best_feasible_terms.loss)) {
      best_feasible = current;
      best_feasible_terms = terms;
      have_feasible = true;
    }
  }

  result.spec = have_feasible ? best_feasible : current;
  const LossTerms final_terms = have_feasible ? best_feasible_terms : terms;
  result.kappa_final = final_terms.kappa;
  result.feasible = final_terms.feasible;
  result.converged = final_terms.feasible && final_terms.kappa < config.kappa_objective;
  const std::size_t last = period_samples(result.spec.period, config.imu_frequency);
  result.trajectory =
      eval_basis(result.spec, make_grid(0.0, 1.0 / config.imu_frequency, last + 1));
  return result;
}

}  // namespace footcal
