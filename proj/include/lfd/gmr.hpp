#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lfd/dtw.hpp"
#include "lfd/gmm.hpp"
#include "lfd/types.hpp"

namespace lfd {

// Two-dimensional (time, angle) mixture for one joint, with the time span
// it was trained on. Regression refuses to extrapolate outside the span.
struct JointGmm {
  Gmm gmm;
  int joint = 0;
  double t_min = 0.0;
  double t_max = 0.0;
};

// Fits one (time, angle) mixture per joint over all aligned demos pooled on
// the reference timeline. Every mixture uses k components.
std::vector<JointGmm> fit_joint_gmms(const AlignedDataset& aligned, int k,
                                     std::uint64_t seed);

struct GmrResult {
  GeneralizedTrajectory trajectory;
  Eigen::MatrixXd variances;  // T x n conditional variances, diagnostics only
};

// Gaussian mixture regression of every joint at the given timestamps. All
// timestamps must lie within the trained span of every mixture.
GmrResult gmr(const std::vector<JointGmm>& models,
              const std::vector<double>& timestamps);

// Convenience: regression on the aligned reference timeline.
GmrResult gmr_on_reference(const std::vector<JointGmm>& models,
                           const AlignedDataset& aligned);

}  // namespace lfd
