#include "lfd/dtw.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lfd {

DtwResult dtw_align(const Eigen::MatrixXd& reference,
                    const Eigen::MatrixXd& candidate) {
  const Eigen::Index la = reference.rows();
  const Eigen::Index lb = candidate.rows();
  if (la < 1 || lb < 1) {
    throw std::invalid_argument("dtw: empty sequence");
  }
  if (reference.cols() != candidate.cols()) {
    throw std::invalid_argument("dtw: dimension mismatch, " +
                                std::to_string(reference.cols()) + " vs " +
                                std::to_string(candidate.cols()));
  }

  // Local Euclidean distances, then the usual O(La*Lb) accumulation.
  Eigen::MatrixXd dist(la, lb);
  for (Eigen::Index i = 0; i < la; ++i) {
    for (Eigen::Index j = 0; j < lb; ++j) {
      dist(i, j) = (reference.row(i) - candidate.row(j)).norm();
    }
  }

  Eigen::MatrixXd acc(la, lb);
  acc(0, 0) = dist(0, 0);
  for (Eigen::Index i = 1; i < la; ++i) acc(i, 0) = acc(i - 1, 0) + dist(i, 0);
  for (Eigen::Index j = 1; j < lb; ++j) acc(0, j) = acc(0, j - 1) + dist(0, j);
  for (Eigen::Index i = 1; i < la; ++i) {
    for (Eigen::Index j = 1; j < lb; ++j) {
      acc(i, j) =
          dist(i, j) + std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
    }
  }

  DtwResult result;
  result.cost = acc(la - 1, lb - 1);

  // Backtrack, preferring the diagonal on ties so self-alignment is the
  // identity path.
  Eigen::Index i = la - 1;
  Eigen::Index j = lb - 1;
  result.path.emplace_back(static_cast<int>(i), static_cast<int>(j));
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

Eigen::MatrixXd warp_to_reference(const Eigen::MatrixXd& candidate,
                                  const DtwResult& alignment,
                                  int reference_length) {
  const Eigen::Index n = candidate.cols();
  Eigen::MatrixXd warped = Eigen::MatrixXd::Zero(reference_length, n);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(reference_length);
  for (const auto& [ri, ci] : alignment.path) {
    if (ri < 0 || ri >= reference_length || ci < 0 || ci >= candidate.rows()) {
      throw std::invalid_argument("dtw: path index out of range");
    }
    warped.row(ri) += candidate.row(ci);
    counts(ri) += 1.0;
  }
  for (int i = 0; i < reference_length; ++i) {
    if (counts(i) == 0.0) {
      throw std::invalid_argument("dtw: path does not cover reference index " +
                                  std::to_string(i));
    }
    warped.row(i) /= counts(i);
  }
  return warped;
}

AlignedDataset align_demonstrations(const DemonstrationSet& set) {
  set.validate();
  const Demonstration& ref = set.demos.front();

  AlignedDataset aligned;
  aligned.reference_timestamps = ref.timestamps;
  aligned.demos.reserve(set.demos.size());
  aligned.costs.reserve(set.demos.size());

  for (const auto& demo : set.demos) {
    DtwResult alignment = dtw_align(ref.joints, demo.joints);
    aligned.demos.push_back(
        warp_to_reference(demo.joints, alignment, ref.length()));
    aligned.costs.push_back(alignment.cost);
  }
  return aligned;
}

}  // namespace lfd
