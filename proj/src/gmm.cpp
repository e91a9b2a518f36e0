#include "lfd/gmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lfd {

namespace {

constexpr double kPriorSumTolerance = 1e-9;
constexpr double kCovarianceRidge = 1e-6;   // times average data variance
constexpr double kCollapsePrior = 1e-8;
constexpr double kRelativeTolerance = 1e-6;
constexpr int kMaxIterations = 300;

double half_log_2pi(int d) {
  return 0.5 * d * std::log(2.0 * std::numbers::pi);
}

// Column-wise population variance, averaged over dimensions. Defines the
// scale of the covariance ridge and of re-seeded components.
double average_variance(const Eigen::MatrixXd& data) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const double den = static_cast<double>(data.rows()) * data.cols();
  return (data.rowwise() - mean).squaredNorm() / den;
}

// Per-point log densities of one Gaussian, vectorized over rows of data.
Eigen::VectorXd component_log_density(const Eigen::MatrixXd& data,
                                      const Eigen::VectorXd& mean,
                                      const Eigen::MatrixXd& chol_lower,
                                      double log_norm) {
  Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  Eigen::MatrixXd solved = chol_lower.triangularView<Eigen::Lower>().solve(
      centered.transpose());
  return (-0.5 * solved.colwise().squaredNorm().array() + log_norm)
      .matrix()
      .transpose();
}

struct WorkingMixture {
  Eigen::VectorXd priors;              // k
  Eigen::MatrixXd means;               // k x d
  std::vector<Eigen::MatrixXd> covs;   // k of d x d
};

// log responsibilities and total log likelihood for the current parameters.
// Returns the B x k responsibility matrix and per-point mixture log density.
double e_step(const Eigen::MatrixXd& data, const WorkingMixture& mix,
              Eigen::MatrixXd& resp, Eigen::VectorXd& point_ll) {
  const Eigen::Index b = data.rows();
  const int k = static_cast<int>(mix.priors.size());
  const int d = static_cast<int>(data.cols());

  Eigen::MatrixXd logs(b, k);
  for (int j = 0; j < k; ++j) {
    Eigen::LLT<Eigen::MatrixXd> llt(mix.covs[j]);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("em: covariance lost positive definiteness");
    }
    Eigen::MatrixXd lower = llt.matrixL();
    const double log_norm = std::log(mix.priors[j]) - half_log_2pi(d) -
                            lower.diagonal().array().log().sum();
    logs.col(j) =
        component_log_density(data, mix.means.row(j).transpose(), lower,
                              log_norm);
  }

  const Eigen::VectorXd row_max = logs.rowwise().maxCoeff();
  const Eigen::ArrayXXd shifted =
      (logs.colwise() - row_max).array().exp();
  const Eigen::VectorXd row_sum = shifted.rowwise().sum();
  point_ll = (row_max.array() + row_sum.array().log()).matrix();
  resp = (shifted.colwise() / row_sum.array()).matrix();
  return point_ll.sum();
}

void m_step(const Eigen::MatrixXd& data, const Eigen::MatrixXd& resp,
            double ridge, WorkingMixture& mix) {
  const Eigen::Index b = data.rows();
  const int k = static_cast<int>(resp.cols());

  const Eigen::VectorXd weight = resp.colwise().sum().transpose();
  mix.priors = weight / static_cast<double>(b);
  for (int j = 0; j < k; ++j) {
    const double w = std::max(weight[j], 1e-300);
    mix.means.row(j) = (resp.col(j).transpose() * data) / w;
    Eigen::MatrixXd centered = data.rowwise() - mix.means.row(j);
    mix.covs[j] =
        (centered.transpose() * resp.col(j).asDiagonal() * centered) / w;
    mix.covs[j].diagonal().array() += ridge;
    mix.covs[j] = 0.5 * (mix.covs[j] + mix.covs[j].transpose().eval());
  }
}

// Re-seeds components whose prior collapsed. Each one moves to the point
// the current mixture explains worst, with an isotropic covariance at the
// data's scale. Returns true if anything changed.
bool rescue_collapsed(const Eigen::MatrixXd& data,
                      const Eigen::VectorXd& point_ll, double avg_var,
                      WorkingMixture& mix) {
  const int k = static_cast<int>(mix.priors.size());
  const int d = static_cast<int>(data.cols());

  std::vector<int> collapsed;
  for (int j = 0; j < k; ++j) {
    if (mix.priors[j] < kCollapsePrior) collapsed.push_back(j);
  }
  if (collapsed.empty()) return false;

  // Worst-explained points first, one distinct point per rescued component.
  std::vector<int> order(point_ll.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b2) { return point_ll[a] < point_ll[b2]; });

  for (std::size_t r = 0; r < collapsed.size(); ++r) {
    const int j = collapsed[r];
    const int point = order[r % order.size()];
    mix.means.row(j) = data.row(point);
    mix.covs[j] = avg_var * Eigen::MatrixXd::Identity(d, d);
    mix.priors[j] = 1.0 / static_cast<double>(data.rows());
  }
  mix.priors /= mix.priors.sum();
  return true;
}

// k-means++ center selection on the data rows.
int sample_by_weight(const Eigen::VectorXd& weights, double total, Rng& rng) {
  double r = rng.uniform() * total;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r <= 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

// Greedy k-means++: every center after the first is sampled several times
// proportionally to the squared distance from the chosen centers, keeping
// the candidate that lowers the total potential the most. The extra
// candidates make missing a small far cluster on the last pick rare.
std::vector<int> kmeanspp_centers(const Eigen::MatrixXd& data, int k,
                                  Rng& rng) {
  const Eigen::Index b = data.rows();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  std::vector<int> centers;
  centers.reserve(k);
  centers.push_back(static_cast<int>(rng.bounded(b)));

  Eigen::VectorXd dist2 =
      (data.rowwise() - data.row(centers[0])).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    if (total <= 0.0) {
      // Every point coincides with an existing center; any choice works.
      centers.push_back(static_cast<int>(rng.bounded(b)));
      continue;
    }
    int best_pick = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_dist2;
    for (int t = 0; t < trials; ++t) {
      const int pick = sample_by_weight(dist2, total, rng);
      Eigen::VectorXd candidate_dist2 = dist2.cwiseMin(
          (data.rowwise() - data.row(pick)).rowwise().squaredNorm());
      const double potential = candidate_dist2.sum();
      if (potential < best_potential) {
        best_potential = potential;
        best_pick = pick;
        best_dist2 = std::move(candidate_dist2);
      }
    }
    centers.push_back(best_pick);
    dist2 = std::move(best_dist2);
  }
  return centers;
}

// Hard assignment to the nearest seed center (lowest index on ties), then
// one M step over the resulting one-hot responsibilities.
WorkingMixture initialize(const Eigen::MatrixXd& data, int k, double ridge,
                          double avg_var, Rng& rng) {
  const Eigen::Index b = data.rows();
  const int d = static_cast<int>(data.cols());
  const std::vector<int> centers = kmeanspp_centers(data, k, rng);

  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(b, k);
  for (Eigen::Index i = 0; i < b; ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      const double dist =
          (data.row(i) - data.row(centers[j])).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    resp(i, best) = 1.0;
  }

  WorkingMixture mix;
  mix.priors.resize(k);
  mix.means.resize(k, d);
  mix.covs.assign(k, Eigen::MatrixXd());
  m_step(data, resp, ridge, mix);

  // A center can end up owning no points when seeds coincide; park such a
  // component on its seed at the data's scale.
  const Eigen::VectorXd counts = resp.colwise().sum().transpose();
  bool touched = false;
  for (int j = 0; j < k; ++j) {
    if (counts[j] < 0.5) {
      mix.means.row(j) = data.row(centers[j]);
      mix.covs[j] = avg_var * Eigen::MatrixXd::Identity(d, d);
      mix.priors[j] = 1.0 / static_cast<double>(b);
      touched = true;
    }
  }
  if (touched) mix.priors /= mix.priors.sum();
  return mix;
}

}  // namespace

Gmm::Gmm(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("gmm: no components");
  }
  const Eigen::Index d = components_[0].mean.size();
  if (d < 1) {
    throw std::invalid_argument("gmm: zero-dimensional component");
  }

  double prior_sum = 0.0;
  chol_lower_.reserve(components_.size());
  log_weight_.reserve(components_.size());
  cum_prior_.reserve(components_.size());
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& comp = components_[j];
    if (comp.mean.size() != d || comp.covariance.rows() != d ||
        comp.covariance.cols() != d) {
      throw std::invalid_argument("gmm: component " + std::to_string(j) +
                                  " has inconsistent dimensions");
    }
    if (!(comp.prior > 0.0) || comp.prior > 1.0) {
      throw std::invalid_argument("gmm: component " + std::to_string(j) +
                                  " prior " + std::to_string(comp.prior) +
                                  " outside (0, 1]");
    }
    if (!comp.mean.allFinite() || !comp.covariance.allFinite()) {
      throw std::invalid_argument("gmm: component " + std::to_string(j) +
                                  " has non-finite parameters");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(comp.covariance);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("gmm: component " + std::to_string(j) +
                                  " covariance is not positive definite");
    }
    chol_lower_.push_back(llt.matrixL());
    log_weight_.push_back(
        std::log(comp.prior) - half_log_2pi(static_cast<int>(d)) -
        chol_lower_.back().diagonal().array().log().sum());
    prior_sum += comp.prior;
    cum_prior_.push_back(prior_sum);
  }
  if (std::abs(prior_sum - 1.0) > kPriorSumTolerance) {
    throw std::invalid_argument("gmm: priors sum to " +
                                std::to_string(prior_sum) + ", expected 1");
  }
  cum_prior_.back() = 1.0;  // guard the last bucket against rounding
}

double Gmm::log_density(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("gmm: point dimension mismatch");
  }
  double max_log = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd logs(size());
  for (int j = 0; j < size(); ++j) {
    const Eigen::VectorXd centered = x - components_[j].mean;
    const double quad =
        chol_lower_[j]
            .triangularView<Eigen::Lower>()
            .solve(centered)
            .squaredNorm();
    logs[j] = log_weight_[j] - 0.5 * quad;
    max_log = std::max(max_log, logs[j]);
  }
  return max_log + std::log((logs.array() - max_log).exp().sum());
}

Eigen::VectorXd Gmm::log_densities(const Eigen::MatrixXd& xs) const {
  if (xs.cols() != dim()) {
    throw std::invalid_argument("gmm: point dimension mismatch");
  }
  Eigen::MatrixXd logs(xs.rows(), size());
  for (int j = 0; j < size(); ++j) {
    logs.col(j) = component_log_density(xs, components_[j].mean,
                                        chol_lower_[j], log_weight_[j]);
  }
  const Eigen::VectorXd row_max = logs.rowwise().maxCoeff();
  return (row_max.array() +
          (logs.colwise() - row_max).array().exp().rowwise().sum().log())
      .matrix();
}

Eigen::MatrixXd Gmm::sample(int count, Rng& rng) const {
  const int d = dim();
  Eigen::MatrixXd out(count, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    int j = 0;
    while (u >= cum_prior_[j]) ++j;
    for (int a = 0; a < d; ++a) z[a] = rng.normal();
    out.row(i) =
        (components_[j].mean +
         chol_lower_[j].triangularView<Eigen::Lower>() * z)
            .transpose();
  }
  return out;
}

EmFit fit_gmm_detailed(const Eigen::MatrixXd& data, int k,
                       std::uint64_t seed) {
  const Eigen::Index b = data.rows();
  const int d = static_cast<int>(data.cols());
  if (k < 1) {
    throw std::invalid_argument("em: component count must be positive");
  }
  if (b < k) {
    throw std::invalid_argument("em: " + std::to_string(k) +
                                " components exceed " + std::to_string(b) +
                                " points");
  }
  if (d < 1 || !data.allFinite()) {
    throw std::invalid_argument("em: data must be finite and non-empty");
  }
  const double avg_var = average_variance(data);
  if (!(avg_var > 0.0)) {
    throw std::invalid_argument("em: degenerate data, all points identical");
  }
  const double ridge = kCovarianceRidge * avg_var;

  Rng rng(seed);
  WorkingMixture mix = initialize(data, k, ridge, avg_var, rng);

  std::vector<double> history;
  history.reserve(64);
  Eigen::MatrixXd resp;
  Eigen::VectorXd point_ll;
  bool converged = false;
  bool rescued = false;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    const double ll = e_step(data, mix, resp, point_ll);
    if (!std::isfinite(ll)) {
      throw std::runtime_error("em: log-likelihood became non-finite");
    }
    if (!history.empty() && !rescued) {
      // EM guarantees this up to the ridge perturbation.
      assert(ll >= history.back() -
                       kRelativeTolerance * (std::abs(history.back()) + 1.0));
    }
    const bool done =
        !history.empty() &&
        std::abs(ll - history.back()) <=
            kRelativeTolerance * (std::abs(history.back()) + 1.0);
    history.push_back(ll);
    if (done) {
      converged = true;
      break;
    }
    m_step(data, resp, ridge, mix);
    rescued = rescue_collapsed(data, point_ll, avg_var, mix);
  }

  std::vector<GaussianComponent> comps(k);
  for (int j = 0; j < k; ++j) {
    comps[j].prior = mix.priors[j];
    comps[j].mean = mix.means.row(j).transpose();
    comps[j].covariance = mix.covs[j];
  }
  // Exact unit sum for the constructor's tolerance check.
  double total = 0.0;
  for (auto& comp : comps) total += comp.prior;
  for (auto& comp : comps) comp.prior /= total;

  EmFit fit{Gmm(std::move(comps)), std::move(history), iter, converged};
  return fit;
}

Gmm fit_gmm(const Eigen::MatrixXd& data, int k, std::uint64_t seed) {
  return fit_gmm_detailed(data, k, seed).model;
}

}  // namespace lfd
