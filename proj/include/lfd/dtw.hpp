#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lfd/types.hpp"

namespace lfd {

// Monotone alignment path between a reference of length La and a candidate
// of length Lb. Pairs are (reference index, candidate index), starting at
// (0,0) and ending at (La-1, Lb-1).
struct DtwResult {
  std::vector<std::pair<int, int>> path;
  double cost = 0.0;  // sum of Euclidean local distances along the path
};

// Full dynamic-programming alignment with steps (1,0), (0,1), (1,1) and no
// band constraint. Ties during backtracking prefer the diagonal step, so
// aligning a sequence with itself yields the identity path.
DtwResult dtw_align(const Eigen::MatrixXd& reference,
                    const Eigen::MatrixXd& candidate);

// Demonstrations warped onto the reference timeline. Candidate samples that
// map to the same reference index are collapsed to their mean, giving every
// demo exactly one row per reference sample.
struct AlignedDataset {
  std::vector<double> reference_timestamps;  // length L
  std::vector<Eigen::MatrixXd> demos;        // M matrices, each L x n
  std::vector<double> costs;                 // per-demo alignment cost

  int size() const { return static_cast<int>(demos.size()); }
  int length() const { return static_cast<int>(reference_timestamps.size()); }
  int dof() const { return demos.empty() ? 0 : static_cast<int>(demos[0].cols()); }
};

// Aligns every demonstration to the first one in the set (the loaders put
// files in lexical order, so that is the lexically first file).
AlignedDataset align_demonstrations(const DemonstrationSet& set);

// Warps one candidate onto the reference timeline using an alignment path.
Eigen::MatrixXd warp_to_reference(const Eigen::MatrixXd& candidate,
                                  const DtwResult& alignment,
                                  int reference_length);

}  // namespace lfd
