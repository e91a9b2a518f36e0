#include "lfd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfd {

double joint_error(const Eigen::VectorXd& target,
                   const Eigen::VectorXd& actual) {
  if (target.size() != actual.size() || target.size() == 0) {
    throw std::invalid_argument("joint error: size mismatch or empty");
  }
  return (target - actual).cwiseAbs().mean();
}

double gmcc(const Eigen::MatrixXd& reference,
            const Eigen::MatrixXd& candidate) {
  if (reference.rows() != candidate.rows() ||
      reference.cols() != candidate.cols()) {
    throw std::invalid_argument("gmcc: shape mismatch");
  }
  if (reference.rows() < reference.cols() + 2) {
    throw std::invalid_argument("gmcc: too few samples for the fit");
  }

  const Eigen::MatrixXd ref_c =
      reference.rowwise() - reference.colwise().mean();
  const Eigen::MatrixXd cand_c =
      candidate.rowwise() - candidate.colwise().mean();

  const double ref_power = ref_c.squaredNorm();
  if (!(ref_power > 0.0)) {
    throw std::invalid_argument("gmcc: degenerate reference with no variance");
  }

  // Least-squares linear map of the centered candidate onto the centered
  // reference; SVD keeps rank-deficient candidates well-defined.
  const Eigen::MatrixXd map =
      cand_c.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(ref_c);
  const double residual = (ref_c - cand_c * map).squaredNorm();

  const double r2 = std::clamp(1.0 - residual / ref_power, 0.0, 1.0);
  return std::sqrt(r2);
}

Eigen::MatrixXd resample_linear(const std::vector<double>& source_times,
                                const Eigen::MatrixXd& source_values,
                                const std::vector<double>& target_times) {
  const int src_count = static_cast<int>(source_times.size());
  if (src_count < 2 ||
      source_values.rows() != static_cast<Eigen::Index>(src_count)) {
    throw std::invalid_argument("resample: bad source");
  }
  for (int i = 1; i < src_count; ++i) {
    if (!(source_times[i] > source_times[i - 1])) {
      throw std::invalid_argument("resample: source times not increasing");
    }
  }

  Eigen::MatrixXd out(static_cast<Eigen::Index>(target_times.size()),
                      source_values.cols());
  for (std::size_t q = 0; q < target_times.size(); ++q) {
    double t = std::clamp(target_times[q], source_times.front(),
                          source_times.back());
    const auto upper =
        std::upper_bound(source_times.begin(), source_times.end(), t);
    int hi = static_cast<int>(upper - source_times.begin());
    hi = std::clamp(hi, 1, src_count - 1);
    const int lo = hi - 1;
    const double w =
        (t - source_times[lo]) / (source_times[hi] - source_times[lo]);
    out.row(static_cast<Eigen::Index>(q)) =
        (1.0 - w) * source_values.row(lo) + w * source_values.row(hi);
  }
  return out;
}

double gmcc_resampled(const std::vector<double>& reference_times,
                      const Eigen::MatrixXd& reference_values,
                      const std::vector<double>& candidate_times,
                      const Eigen::MatrixXd& candidate_values) {
  if (reference_times.size() <= candidate_times.size()) {
    const Eigen::MatrixXd cand =
        resample_linear(candidate_times, candidate_values, reference_times);
    return gmcc(reference_values, cand);
  }
  const Eigen::MatrixXd ref =
      resample_linear(reference_times, reference_values, candidate_times);
  return gmcc(ref, candidate_values);
}

}  // namespace lfd
