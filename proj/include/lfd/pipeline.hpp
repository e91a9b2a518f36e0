#pragma once

#include <cstdint>
#include <vector>

#include "lfd/bayesopt.hpp"
#include "lfd/dtw.hpp"
#include "lfd/gmr.hpp"
#include "lfd/model.hpp"
#include "lfd/selection.hpp"
#include "lfd/types.hpp"

namespace lfd {

struct TrainOptions {
  int k_min = 2;
  int k_max = 9;
  int splits = 50;        // half/half refits per candidate k
  int mc_samples = 2000;  // JS divergence draws
  double alpha = 0.05;    // Welch test level
  SearchSpace space;      // spring parameter grid
  int max_calls = 100;    // optimizer evaluation budget
  std::uint64_t seed = 0;
};

struct TrainReport {
  int k_star = 0;
  double alpha_z = 0.0;
  int n_basis = 0;
  double objective = 0.0;
  int optimizer_calls = 0;
  double seconds = 0.0;
  std::vector<SelectionRecord> selection;
  OptimizeResult optimization;
};

// Full pipeline: align, pick the component count, regress, tune the spring
// parameters, encode. Any stage failure is reported with the stage name.
MotionModel train_model(const DemonstrationSet& set, const TrainOptions& opts,
                        TrainReport* report = nullptr);

struct Reproduction {
  std::vector<double> timestamps;
  Eigen::MatrixXd positions;   // T x n, degrees
  Eigen::MatrixXd velocities;  // T x n, scaled spring velocity z
  double joint_error = 0.0;    // mean absolute final error vs goal, degrees
  double gmcc = 0.0;           // similarity vs the stored trajectory
};

// Rolls every joint's spring out from a new start to a new goal. A dt of 0
// picks the median step of the stored trajectory.
Reproduction reproduce(const MotionModel& model, const Eigen::VectorXd& start,
                       const Eigen::VectorXd& goal, double dt = 0.0);

struct EvaluationRow {
  double noise_deg = 0.0;
  int reps = 0;
  double gmcc_mean = 0.0;
  double gmcc_std = 0.0;
  double joint_error_mean = 0.0;
  double joint_error_std = 0.0;
};

// Reproduction quality under Gaussian start perturbations of each listed
// magnitude; the goal stays at the trained endpoint. Draws are keyed by
// (noise index, rep), so rows are independent of evaluation order.
std::vector<EvaluationRow> evaluate_model(const MotionModel& model, int reps,
                                          const std::vector<double>& noise_deg,
                                          std::uint64_t seed);

struct CompareReport {
  OptimizeResult grid;
  OptimizeResult bayes;
  double grid_seconds = 0.0;
  double bayes_seconds = 0.0;
};

// Trains the regression once, then runs exhaustive grid search and the
// Bayesian optimizer on the identical tracking objective.
CompareReport compare_optimizers(const DemonstrationSet& set,
                                 const TrainOptions& opts);

// Synthetic demonstration family: per joint a minimum-jerk stroke plus a
// mid-motion detour, executed with per-demo duration changes, a smooth
// monotone time warp, and Gaussian sample noise. `shape` switches the task
// geometry; demos of one (seed, shape) pair share it.
struct SynthSpec {
  int dof = 3;
  int demos = 5;
  int samples = 300;            // rows per demo
  double duration = 5.0;        // nominal seconds
  double duration_jitter = 0.1; // fractional spread of per-demo duration
  double warp = 0.05;           // time-warp strength
  double noise_deg = 0.5;       // sample noise
  int shape = 0;
  std::uint64_t seed = 0;
};

DemonstrationSet synthesize_demonstrations(const SynthSpec& spec);

}  // namespace lfd
