#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "footcal/leg_kinematics.hpp"

namespace footcal {

/// Harmonic excitation for one leg:
///   hip rate           = sum_k a[k] sin(k f t)
///   thigh + calf rate  = sum_k b[k] cos(k f t)
/// with k = 1..N. The summed thigh/calf motion is split calf_share : 1 - calf_share
/// between calf and thigh. Angles are the closed-form integrals
///   hip         = posture[hip] - sum_k a[k] / (k f) cos(k f t)
///   thigh+calf  = sum_k b[k] / (k f) sin(k f t)      (plus postures)
/// Every joint angle carries a constant posture offset. Offsets leave the
/// foot-frame covariance spectrum unchanged (hip offset does not enter the
/// foot velocity; a thigh/calf offset rotates the x-y plane).
struct BasisSpec {
  std::vector<double> a;  // rad/s
  std::vector<double> b;  // rad/s
  double frequency = 0.0;  // rad/s
  double period = 0.0;     // s
  double calf_share = 0.0;
  std::array<double, kNumJoints> posture{};

  std::size_t harmonics() const { return a.size(); }

  /// Frequency pi / (4 t_r) and period 8 t_r for an offset search range t_r.
  static BasisSpec for_offset_range(double offset_range, std::vector<double> a,
                                    std::vector<double> b);

  /// Throws kDomain if any invariant fails.
  void validate() const;
};

struct Schedule {
  double frequency = 0.0;          // rad/s
  double period = 0.0;             // s
  std::vector<double> time_grid;   // {i / f_imu : i = 0 .. floor(T f_imu)}, both ends included

  /// The first floor(T f_imu) points of time_grid: one period without the
  /// repeated end point. Used for every covariance over "one period".
  std::vector<double> period_grid() const;
};

Schedule derive_schedule(double imu_frequency, double offset_range);

/// Uniform grid covering [0, period) at `sample_rate`.
std::vector<double> one_period_grid(double period, double sample_rate);

JointTrajectory eval_basis(const BasisSpec& spec, std::span<const double> time_grid);

struct OptimizerConfig {
  double kappa_objective = 1.2;
  int max_iterations = 5000;
  double step_size = 1.0;
  double fd_epsilon = 1e-6;
  std::array<double, kNumJoints> penalty_weights = {1.0, 1.0, 1.0};
  double imu_frequency = 500.0;  // Hz
  double offset_range = 0.25;    // s
  std::uint64_t seed = 1;
  int harmonics = 3;
  double initial_min = 0.5;  // rad/s, lower bound of random initial coefficients
  double initial_max = 1.5;
  double calf_share = 0.0;
  // Pull candidates that leave the joint limits back inside: re-center the
  // joint's posture, then shrink the coefficients driving it if needed.
  bool retract_to_limits = true;
  // When descent stalls before the objective is met, continue from a fresh
  // seeded draw of coefficients; the best feasible iterate is kept.
  bool restart_on_stall = true;

  void validate() const;
};

struct LossTerms {
  double loss = 0.0;
  double kappa = 0.0;
  std::array<double, kNumJoints> penalties{};  // w_idx * range_idx, zero when in bounds
  bool feasible = true;                        // every joint inside its limits
};

/// kappa(Sigma_FF) plus the joint-range penalty of every joint that leaves its
/// limits, evaluated over one period of the spec at config.imu_frequency.
LossTerms trajectory_loss(const BasisSpec& spec, const OptimizerConfig& config,
                          const LegGeometry& geometry);

/// Central finite-difference gradient of the loss with respect to
/// (a[0..N-1], b[0..N-1]) using step `epsilon`.
std::vector<double> loss_gradient(const BasisSpec& spec, const OptimizerConfig& config,
                                  const LegGeometry& geometry, double epsilon);

/// N harmonics with coefficients drawn uniformly from
/// [initial_min, initial_max] using config.seed; posture at the limit midpoints.
BasisSpec random_initial_spec(const OptimizerConfig& config, const LegGeometry& geometry);

struct OptimizationResult {
  BasisSpec spec;
  JointTrajectory trajectory;         // spec evaluated on the schedule grid
  std::vector<double> kappa_history;  // kappa of the iterate, initial spec first, then one per loop pass
  std::vector<double> loss_history;   // best-so-far loss, one entry per loop pass
  int iterations = 0;                 // accepted gradient steps
  int restarts = 0;
  double kappa_final = 0.0;
  bool converged = false;  // kappa < objective with all joints in bounds
  bool feasible = false;
};

/// Moves a spec inside the geometry's joint limits without changing its
/// foot-frame covariance shape: each violating joint's posture is re-centered
/// on its limit interval, and if the excursion is still wider than the
/// interval the coefficients driving it (a for hip, b for thigh/calf) are
/// scaled down to fit. Limits are checked on one period at sample_rate.
BasisSpec retract_to_limits(const BasisSpec& spec, const LegGeometry& geometry, double sample_rate);

/// Gradient descent on (a, b) with backtracking: a step that raises the loss
/// or produces non-finite values is rejected and the step size halved. With
/// config.retract_to_limits each candidate is passed through
/// retract_to_limits() before it is scored.
/// Stops at the objective or after max_iterations loop passes. A stalled run
/// ends there unless config.restart_on_stall is set.
OptimizationResult optimize(const BasisSpec& initial, const OptimizerConfig& config,
                            const LegGeometry& geometry);

}  // namespace footcal
