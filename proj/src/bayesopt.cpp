#include "lfd/bayesopt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lfd/parallel.hpp"
#include "lfd/spring.hpp"

namespace lfd {

namespace {

constexpr double kMaxJitter = 1e-2;
constexpr double kVarianceClamp = 1e-10;  // times prior amplitude

double normal_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double u) {
  return 0.5 * std::erfc(-u / std::numbers::sqrt2);
}

}  // namespace

void SearchSpace::validate() const {
  if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo)) {
    throw std::invalid_argument("search space: need 0 < alpha_lo < alpha_hi");
  }
  if (alpha_steps < 2) {
    throw std::invalid_argument("search space: needs at least 2 alpha steps");
  }
  if (n_lo < 2 || n_hi < n_lo) {
    throw std::invalid_argument("search space: need 2 <= n_lo <= n_hi");
  }
}

GaussianProcess::GaussianProcess(double length_scale, double jitter)
    : length_scale_(length_scale), base_jitter_(jitter) {
  if (!(length_scale > 0.0) || !(jitter >= 0.0)) {
    throw std::invalid_argument("gp: bad length scale or jitter");
  }
}

void GaussianProcess::fit(const std::vector<Eigen::Vector2d>& points,
                          const std::vector<double>& values) {
  if (points.empty() || points.size() != values.size()) {
    throw std::invalid_argument("gp: empty or mismatched training data");
  }
  const int n = static_cast<int>(points.size());
  points_ = points;

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;
  prior_mean_ = mean;
  amplitude2_ = var > 0.0 ? var : 1.0;

  Eigen::MatrixXd gram(n, n);
  const double inv2l2 = 1.0 / (2.0 * length_scale_ * length_scale_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double k =
          amplitude2_ *
          std::exp(-(points_[i] - points_[j]).squaredNorm() * inv2l2);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }

  Eigen::VectorXd centered(n);
  for (int i = 0; i < n; ++i) centered[i] = values[i] - prior_mean_;

  // Escalate the diagonal jitter until the Gram matrix factorizes.
  double jitter = base_jitter_;
  while (true) {
    Eigen::MatrixXd regularized = gram;
    regularized.diagonal().array() += jitter * amplitude2_;
    chol_.compute(regularized);
    if (chol_.info() == Eigen::Success) break;
    if (jitter > kMaxJitter) {
      throw std::runtime_error("gp: kernel matrix failed to factorize");
    }
    jitter = jitter > 0.0 ? jitter * 10.0 : 1e-12;
  }
  alpha_ = chol_.solve(centered);
}

void GaussianProcess::predict(const Eigen::Vector2d& x, double& mean,
                              double& variance) const {
  if (points_.empty()) {
    throw std::runtime_error("gp: predict before fit");
  }
  const int n = static_cast<int>(points_.size());
  const double inv2l2 = 1.0 / (2.0 * length_scale_ * length_scale_);
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) {
    k[i] = amplitude2_ * std::exp(-(x - points_[i]).squaredNorm() * inv2l2);
  }
  mean = prior_mean_ + k.dot(alpha_);
  variance = amplitude2_ - k.dot(chol_.solve(k));
  if (variance < kVarianceClamp * amplitude2_) variance = 0.0;
}

double expected_improvement(double mean, double sigma, double best) {
  if (sigma < 0.0) {
    throw std::invalid_argument("expected improvement: negative sigma");
  }
  const double gap = best - mean;
  if (sigma == 0.0) return gap > 0.0 ? gap : 0.0;
  const double u = gap / sigma;
  return gap * normal_cdf(u) + sigma * normal_pdf(u);
}

OptimizeResult bayes_opt(const Objective& objective, const SearchSpace& space,
                         std::uint64_t seed, int max_calls) {
  space.validate();
  (void)seed;  // the scan and its tie-breaks are deterministic
  if (max_calls < 6) {
    throw std::invalid_argument("bayes opt: max_calls must cover the starts");
  }

  OptimizeResult result;
  std::vector<Eigen::Vector2d> xs;
  std::vector<double> ys;

  auto evaluate = [&](int i, int j) {
    const double alpha = space.alpha_at(i);
    const int n_basis = space.n_at(j);
    const double value = objective(alpha, n_basis);
    if (!std::isfinite(value)) {
      throw std::runtime_error("bayes opt: objective returned non-finite value");
    }
    result.evaluations.push_back({alpha, n_basis, value});
    const double best = result.best_so_far.empty()
                            ? value
                            : std::min(result.best_so_far.back(), value);
    result.best_so_far.push_back(best);
    xs.push_back(space.normalized(alpha, n_basis));
    ys.push_back(value);
  };

  // Four corners plus the center of the grid.
  const int ai_hi = space.alpha_count() - 1;
  const int nj_hi = space.n_count() - 1;
  const std::pair<int, int> starts[] = {
      {0, 0}, {0, nj_hi}, {ai_hi, 0}, {ai_hi, nj_hi}, {ai_hi / 2, nj_hi / 2}};
  for (const auto& [i, j] : starts) evaluate(i, j);

  GaussianProcess gp;
  int prev_i = -1;
  int prev_j = -1;
  while (true) {
    if (static_cast<int>(result.evaluations.size()) >= max_calls) {
      result.stop_reason = "evaluation budget exhausted";
      break;
    }
    gp.fit(xs, ys);
    const double best = result.best_so_far.back();

    // Exhaustive scan; strict improvement keeps the lexically first argmax,
    // so ties resolve to the lowest alpha_z, then the lowest N.
    double best_ei = -1.0;
    int pick_i = 0;
    int pick_j = 0;
    for (int i = 0; i < space.alpha_count(); ++i) {
      for (int j = 0; j < space.n_count(); ++j) {
        const Eigen::Vector2d u =
            space.normalized(space.alpha_at(i), space.n_at(j));
        double mu, var;
        gp.predict(u, mu, var);
        const double ei = expected_improvement(mu, std::sqrt(var), best);
        if (ei > best_ei) {
          best_ei = ei;
          pick_i = i;
          pick_j = j;
        }
      }
    }

    if (pick_i == prev_i && pick_j == prev_j) {
      result.stop_reason = "proposal repeated the previous query";
      break;
    }
    prev_i = pick_i;
    prev_j = pick_j;
    evaluate(pick_i, pick_j);
  }

  // Report the best evaluation, earliest on ties.
  std::size_t best_index = 0;
  for (std::size_t e = 1; e < result.evaluations.size(); ++e) {
    if (result.evaluations[e].value <
        result.evaluations[best_index].value) {
      best_index = e;
    }
  }
  result.alpha_z = result.evaluations[best_index].alpha_z;
  result.n_basis = result.evaluations[best_index].n_basis;
  result.value = result.evaluations[best_index].value;
  return result;
}

OptimizeResult grid_search(const Objective& objective,
                           const SearchSpace& space) {
  space.validate();
  const int total = space.total();
  OptimizeResult result;
  result.evaluations.resize(total);

  parallel_for(static_cast<std::size_t>(total), [&](std::size_t item) {
    const int i = static_cast<int>(item) / space.n_count();
    const int j = static_cast<int>(item) % space.n_count();
    const double alpha = space.alpha_at(i);
    const int n_basis = space.n_at(j);
    result.evaluations[item] = {alpha, n_basis, objective(alpha, n_basis)};
  });

  result.best_so_far.resize(total);
  std::size_t best_index = 0;
  for (int e = 0; e < total; ++e) {
    if (!std::isfinite(result.evaluations[e].value)) {
      throw std::runtime_error("grid search: objective returned non-finite value");
    }
    if (result.evaluations[e].value <
        result.evaluations[best_index].value) {
      best_index = static_cast<std::size_t>(e);
    }
    result.best_so_far[e] = result.evaluations[best_index].value;
  }
  result.alpha_z = result.evaluations[best_index].alpha_z;
  result.n_basis = result.evaluations[best_index].n_basis;
  result.value = result.evaluations[best_index].value;
  result.stop_reason = "exhaustive";
  return result;
}

Objective tracking_objective(const GeneralizedTrajectory& reference) {
  if (reference.length() < 3 || reference.dof() < 1) {
    throw std::invalid_argument("tracking objective: reference too short");
  }
  // Copy the reference so the objective owns its data.
  const GeneralizedTrajectory ref = reference;
  return [ref](double alpha_z, int n_basis) {
    const int t_count = ref.length();
    const int n = ref.dof();
    Eigen::MatrixXd rolled(t_count, n);
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd y = ref.means.col(j);
      const SpringModel model =
          fit_spring(ref.timestamps, y, alpha_z, n_basis);
      rolled.col(j) = rollout_at(model, y[0], y[t_count - 1], ref.timestamps);
    }
    const double rms =
        std::sqrt((rolled - ref.means).rowwise().squaredNorm().sum() /
                  static_cast<double>(t_count));
    const double final_gap =
        (rolled.row(t_count - 1) - ref.means.row(t_count - 1)).norm();
    return rms + final_gap;
  };
}

}  // namespace lfd
