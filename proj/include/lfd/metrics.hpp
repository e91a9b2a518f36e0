#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lfd {

// Mean absolute per-joint difference between two joint vectors, in degrees.
double joint_error(const Eigen::VectorXd& target, const Eigen::VectorXd& actual);

// Affine-invariant similarity in [0, 1] between two equally sampled
// trajectories (rows are time, columns joints). Both are centered; the
// candidate is then mapped onto the reference by the least-squares linear
// map, and the score is sqrt(1 - relative residual power). Any affine image
// of the reference scores exactly 1. Throws for a constant reference, whose
// centered power is zero.
double gmcc(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& candidate);

// Linear interpolation of a trajectory onto new timestamps. Queries are
// clamped to the source time range.
Eigen::MatrixXd resample_linear(const std::vector<double>& source_times,
                                const Eigen::MatrixXd& source_values,
                                const std::vector<double>& target_times);

// gmcc between trajectories on different timelines: the longer one is
// resampled onto the shorter one's timestamps first.
double gmcc_resampled(const std::vector<double>& reference_times,
                      const Eigen::MatrixXd& reference_values,
                      const std::vector<double>& candidate_times,
                      const Eigen::MatrixXd& candidate_values);

}  // namespace lfd
