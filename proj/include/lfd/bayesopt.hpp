#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lfd/types.hpp"

namespace lfd {

// Discrete search grid over the spring stiffness alpha_z and the kernel
// count N: alpha_steps evenly spaced stiffness values crossed with every
// integer kernel count in [n_lo, n_hi].
struct SearchSpace {
  double alpha_lo = 1.0;
  double alpha_hi = 60.0;
  int alpha_steps = 75;
  int n_lo = 2;
  int n_hi = 51;

  int alpha_count() const { return alpha_steps; }
  int n_count() const { return n_hi - n_lo + 1; }
  int total() const { return alpha_count() * n_count(); }
  double alpha_at(int i) const {
    return alpha_lo + (alpha_hi - alpha_lo) * i / (alpha_steps - 1);
  }
  int n_at(int j) const { return n_lo + j; }

  // Maps grid coordinates into the unit square for the surrogate kernel by
  // dividing each coordinate by its largest value.
  Eigen::Vector2d normalized(double alpha_z, int n_basis) const {
    return {alpha_z / alpha_hi, static_cast<double>(n_basis) / n_hi};
  }

  void validate() const;
};

// Zero-mean-offset Gaussian process with a squared-exponential kernel on
// normalized coordinates. The prior mean is the mean of the observations
// and the signal amplitude their variance, so no hyperparameter fitting is
// involved.
class GaussianProcess {
 public:
  explicit GaussianProcess(double length_scale = 0.2, double jitter = 1e-8);

  void fit(const std::vector<Eigen::Vector2d>& points,
           const std::vector<double>& values);

  // Posterior mean and variance. The mean interpolates observations to
  // jitter-scale accuracy and the variance at an observed point sits at the
  // jitter floor; anything below 1e-10 times the prior amplitude is clamped
  // to exactly zero so roundoff can never report a negative variance.
  void predict(const Eigen::Vector2d& x, double& mean, double& variance) const;

  double prior_mean() const { return prior_mean_; }
  double amplitude2() const { return amplitude2_; }

 private:
  double length_scale_;
  double base_jitter_;
  double prior_mean_ = 0.0;
  double amplitude2_ = 1.0;
  std::vector<Eigen::Vector2d> points_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;  // K^-1 (y - prior mean)
};

// Expected improvement below `best` for a Gaussian posterior N(mean, sigma^2).
// With sigma = 0 this is max(best - mean, 0).
double expected_improvement(double mean, double sigma, double best);

struct Evaluation {
  double alpha_z = 0.0;
  int n_basis = 0;
  double value = 0.0;
};

struct OptimizeResult {
  double alpha_z = 0.0;
  int n_basis = 0;
  double value = 0.0;
  std::vector<Evaluation> evaluations;  // in evaluation order
  std::vector<double> best_so_far;      // running minimum, same length
  std::string stop_reason;

  int calls() const { return static_cast<int>(evaluations.size()); }
};

using Objective = std::function<double(double alpha_z, int n_basis)>;

// Bayesian minimization over the grid: five fixed corner/center starts,
// then repeated expected-improvement maximization by exhaustive scan over
// the grid (ties go to the lowest alpha_z, then lowest N). Stops when the
// proposal repeats the previous query or after max_calls evaluations. The
// procedure is deterministic; the seed is accepted for interface stability.
OptimizeResult bayes_opt(const Objective& objective, const SearchSpace& space,
                         std::uint64_t seed, int max_calls = 100);

// Evaluates every grid point and returns the minimum (same tie-breaking).
OptimizeResult grid_search(const Objective& objective,
                           const SearchSpace& space);

// Tracking cost of a spring fit to the reference: RMS joint-space distance
// over the reference timeline plus the final-point distance, in degrees.
// Each call fits one spring per joint at the proposed (alpha_z, N) and
// integrates it on the reference's own timestamps.
Objective tracking_objective(const GeneralizedTrajectory& reference);

}  // namespace lfd
