#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace lfd {

// One recorded demonstration: joint angles in degrees sampled at strictly
// increasing timestamps in seconds. Sampling may be non-uniform; nothing
// downstream assumes a fixed rate.
struct Demonstration {
  std::vector<double> timestamps;  // length L
  Eigen::MatrixXd joints;          // L x n, degrees
  std::string source;              // originating file, when loaded from disk

  int length() const { return static_cast<int>(joints.rows()); }
  int dof() const { return static_cast<int>(joints.cols()); }

  // Throws std::invalid_argument naming the violated requirement.
  void validate() const;
};

// A set of demonstrations of the same motion. Order matters: the first
// entry is the alignment reference (loaders sort files lexically).
struct DemonstrationSet {
  std::vector<Demonstration> demos;

  int size() const { return static_cast<int>(demos.size()); }
  int dof() const { return demos.empty() ? 0 : demos.front().dof(); }

  // At least two demos, each individually valid, all with the same DOF.
  void validate() const;
};

// Generalized (regressed) trajectory on a common timeline.
struct GeneralizedTrajectory {
  std::vector<double> timestamps;  // length T
  Eigen::MatrixXd means;           // T x n, degrees

  int length() const { return static_cast<int>(means.rows()); }
  int dof() const { return static_cast<int>(means.cols()); }
  double duration() const {
    return timestamps.empty() ? 0.0 : timestamps.back() - timestamps.front();
  }
};

}  // namespace lfd
