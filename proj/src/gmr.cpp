#include "lfd/gmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lfd {

std::vector<JointGmm> fit_joint_gmms(const AlignedDataset& aligned, int k,
                                     std::uint64_t seed) {
  if (aligned.size() < 1 || aligned.length() < 2) {
    throw std::invalid_argument("joint gmm: empty aligned dataset");
  }
  const int n = aligned.dof();
  const int t_count = aligned.length();
  const int m = aligned.size();

  std::vector<JointGmm> models;
  models.reserve(n);
  for (int j = 0; j < n; ++j) {
    // Pool (t, angle) pairs from every demo on the shared timeline.
    Eigen::MatrixXd data(static_cast<Eigen::Index>(m) * t_count, 2);
    Eigen::Index row = 0;
    for (int demo = 0; demo < m; ++demo) {
      for (int i = 0; i < t_count; ++i, ++row) {
        data(row, 0) = aligned.reference_timestamps[i];
        data(row, 1) = aligned.demos[demo](i, j);
      }
    }
    Gmm gmm = fit_gmm(data, k, derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    for (int c = 0; c < gmm.size(); ++c) {
      if (!(gmm.components()[c].covariance(0, 0) > 0.0)) {
        throw std::runtime_error("joint gmm: component " + std::to_string(c) +
                                 " has no time variance");
      }
    }
    models.push_back(JointGmm{std::move(gmm), j,
                              aligned.reference_timestamps.front(),
                              aligned.reference_timestamps.back()});
  }
  return models;
}

GmrResult gmr(const std::vector<JointGmm>& models,
              const std::vector<double>& timestamps) {
  if (models.empty()) {
    throw std::invalid_argument("gmr: no joint models");
  }
  if (timestamps.empty()) {
    throw std::invalid_argument("gmr: no query timestamps");
  }
  const int n = static_cast<int>(models.size());
  const int t_count = static_cast<int>(timestamps.size());

  GmrResult result;
  result.trajectory.timestamps = timestamps;
  result.trajectory.means.resize(t_count, n);
  result.variances.resize(t_count, n);

  for (int j = 0; j < n; ++j) {
    const JointGmm& model = models[j];
    const auto& comps = model.gmm.components();
    const int k = model.gmm.size();

    // Tolerate only rounding-level excursions beyond the trained span.
    const double span = model.t_max - model.t_min;
    const double slack = 1e-9 * std::max(span, 1.0);

    std::vector<double> log_prior(k), cond_gain(k), cond_var(k);
    for (int c = 0; c < k; ++c) {
      const auto& comp = comps[c];
      log_prior[c] = std::log(comp.prior);
      cond_gain[c] = comp.covariance(1, 0) / comp.covariance(0, 0);
      cond_var[c] =
          comp.covariance(1, 1) -
          comp.covariance(1, 0) * comp.covariance(0, 1) / comp.covariance(0, 0);
    }

    for (int i = 0; i < t_count; ++i) {
      const double t = timestamps[i];
      if (t < model.t_min - slack || t > model.t_max + slack) {
        throw std::invalid_argument(
            "gmr: time " + std::to_string(t) + " outside trained span [" +
            std::to_string(model.t_min) + ", " + std::to_string(model.t_max) +
            "], extrapolation is not supported");
      }

      // Responsibilities from the time marginal, normalized in log space so
      // the tails of the span cannot underflow to 0/0.
      double max_log = -std::numeric_limits<double>::infinity();
      std::vector<double> logs(k);
      for (int c = 0; c < k; ++c) {
        const auto& comp = comps[c];
        const double dt = t - comp.mean[0];
        logs[c] = log_prior[c] -
                  0.5 * (std::log(2.0 * std::numbers::pi *
                                  comp.covariance(0, 0)) +
                         dt * dt / comp.covariance(0, 0));
        max_log = std::max(max_log, logs[c]);
      }
      double denom = 0.0;
      for (int c = 0; c < k; ++c) denom += std::exp(logs[c] - max_log);

      double mean = 0.0;
      double second_moment = 0.0;
      for (int c = 0; c < k; ++c) {
        const double h = std::exp(logs[c] - max_log) / denom;
        const double cond_mean =
            comps[c].mean[1] + cond_gain[c] * (t - comps[c].mean[0]);
        mean += h * cond_mean;
        second_moment += h * (cond_var[c] + cond_mean * cond_mean);
      }
      result.trajectory.means(i, j) = mean;
      result.variances(i, j) = std::max(0.0, second_moment - mean * mean);
    }
  }
  return result;
}

GmrResult gmr_on_reference(const std::vector<JointGmm>& models,
                           const AlignedDataset& aligned) {
  return gmr(models, aligned.reference_timestamps);
}

}  // namespace lfd
