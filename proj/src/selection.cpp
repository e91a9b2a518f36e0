#include "lfd/selection.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lfd/parallel.hpp"
#include "lfd/rng.hpp"
#include "lfd/studentt.hpp"

namespace lfd {

namespace {

const double kLn2 = std::numbers::ln2;

// Mean and sample standard deviation (n-1 denominator).
void mean_and_std(const std::vector<double>& xs, double& mean,
                  double& stddev) {
  const double n = static_cast<double>(xs.size());
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  stddev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

JsEstimate js_divergence_detailed(const Gmm& p, const Gmm& q, int mc_samples,
                                  std::uint64_t seed) {
  if (p.dim() != q.dim()) {
    throw std::invalid_argument("js divergence: dimension mismatch");
  }
  if (mc_samples < 2) {
    throw std::invalid_argument("js divergence: needs at least 2 samples");
  }

  // The same uniform stream drives both mixtures. Sampling consumes a fixed
  // number of draws per point, so xp[i] and xq[i] come from identical
  // uniforms and swapping the arguments swaps only the two KL terms.
  Rng rng_p(seed);
  Rng rng_q(seed);
  const Eigen::MatrixXd xp = p.sample(mc_samples, rng_p);
  const Eigen::MatrixXd xq = q.sample(mc_samples, rng_q);

  const Eigen::VectorXd log_p_xp = p.log_densities(xp);
  const Eigen::VectorXd log_q_xp = q.log_densities(xp);
  const Eigen::VectorXd log_p_xq = p.log_densities(xq);
  const Eigen::VectorXd log_q_xq = q.log_densities(xq);

  // Per-sample contribution: 0.5*log(p/m)(xp_i) + 0.5*log(q/m)(xq_i) with
  // m = (p+q)/2. log m = logaddexp(log p, log q) - ln 2.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < mc_samples; ++i) {
    const double max_p = std::max(log_p_xp[i], log_q_xp[i]);
    const double log_m_xp = max_p +
                            std::log(std::exp(log_p_xp[i] - max_p) +
                                     std::exp(log_q_xp[i] - max_p)) -
                            kLn2;
    const double max_q = std::max(log_p_xq[i], log_q_xq[i]);
    const double log_m_xq = max_q +
                            std::log(std::exp(log_p_xq[i] - max_q) +
                                     std::exp(log_q_xq[i] - max_q)) -
                            kLn2;
    const double term =
        0.5 * (log_p_xp[i] - log_m_xp) + 0.5 * (log_q_xq[i] - log_m_xq);
    sum += term;
    sum_sq += term * term;
  }

  const double n = static_cast<double>(mc_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));

  JsEstimate est;
  est.value = std::min(std::max(mean, 0.0), kLn2);
  est.std_error = std::sqrt(var / n);
  return est;
}

double js_divergence(const Gmm& p, const Gmm& q, int mc_samples,
                     std::uint64_t seed) {
  return js_divergence_detailed(p, q, mc_samples, seed).value;
}

double welch_one_tailed_p(double mean_a, double std_a, int n_a, double mean_b,
                          double std_b, int n_b) {
  if (n_a < 2 || n_b < 2) {
    throw std::invalid_argument("welch test: needs at least 2 samples per side");
  }
  if (std_a < 0.0 || std_b < 0.0) {
    throw std::invalid_argument("welch test: negative standard deviation");
  }

  const double var_a = std_a * std_a / n_a;
  const double var_b = std_b * std_b / n_b;
  const double se2 = var_a + var_b;
  if (se2 == 0.0) {
    // Degenerate samples: the difference in means is known exactly.
    if (mean_a > mean_b) return 0.0;
    if (mean_a < mean_b) return 1.0;
    return 0.5;
  }

  const double t = (mean_a - mean_b) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (var_a * var_a / (n_a - 1) + var_b * var_b / (n_b - 1));
  return 1.0 - student_t_cdf(t, df);
}

int arbitrate_k(const std::vector<SelectionRecord>& records, double alpha) {
  if (records.empty()) {
    throw std::invalid_argument("arbitrate: no records");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].k <= records[i - 1].k) {
      throw std::invalid_argument("arbitrate: records must be ascending in k");
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].mean < records[best].mean) best = i;
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i == best) continue;
    const SelectionRecord& challenger = records[i];
    const SelectionRecord& incumbent = records[best];
    const int n_c = static_cast<int>(challenger.divergences.size());
    const int n_i = static_cast<int>(incumbent.divergences.size());

    // Challenger credibly worse: keep the incumbent.
    const double p_worse =
        welch_one_tailed_p(challenger.mean, challenger.stddev, n_c,
                           incumbent.mean, incumbent.stddev, n_i);
    if (p_worse < alpha) continue;

    // Incumbent credibly worse, or a tie broken by lower spread.
    const double p_better =
        welch_one_tailed_p(incumbent.mean, incumbent.stddev, n_i,
                           challenger.mean, challenger.stddev, n_c);
    if (p_better < alpha || challenger.stddev < incumbent.stddev) {
      best = i;
    }
  }
  return records[best].k;
}

SelectionResult select_k(const Eigen::MatrixXd& data,
                         const SelectionConfig& cfg) {
  const Eigen::Index b = data.rows();
  const Eigen::Index d = data.cols();
  if (cfg.k_min < 2 || cfg.k_min > cfg.k_max) {
    throw std::invalid_argument("select_k: need 2 <= k_min <= k_max");
  }
  if (cfg.splits < 2) {
    throw std::invalid_argument("select_k: needs at least 2 splits");
  }
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
    throw std::invalid_argument("select_k: alpha must be in (0, 1)");
  }
  const Eigen::Index half = b / 2;
  if (half < cfg.k_max * (d + 1)) {
    throw std::invalid_argument(
        "select_k: " + std::to_string(b) + " points are too few for k_max=" +
        std::to_string(cfg.k_max) + " in " + std::to_string(d) + "-d");
  }

  const int n_k = cfg.k_max - cfg.k_min + 1;
  SelectionResult result;
  result.records.resize(n_k);
  for (int i = 0; i < n_k; ++i) {
    result.records[i].k = cfg.k_min + i;
    result.records[i].divergences.resize(cfg.splits);
  }

  // One work item per (k, split), each with its own seed-derived streams.
  const std::size_t total =
      static_cast<std::size_t>(n_k) * static_cast<std::size_t>(cfg.splits);
  parallel_for(total, [&](std::size_t item) {
    const int ki = static_cast<int>(item / cfg.splits);
    const int split = static_cast<int>(item % cfg.splits);
    const int k = cfg.k_min + ki;
    const auto kid = static_cast<std::uint64_t>(k);
    const auto sid = static_cast<std::uint64_t>(split);

    std::vector<int> perm(b);
    std::iota(perm.begin(), perm.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, {kid, sid, 0}));
    shuffle_rng.shuffle(perm);

    Eigen::MatrixXd first(half, d);
    Eigen::MatrixXd second(half, d);
    for (Eigen::Index r = 0; r < half; ++r) {
      first.row(r) = data.row(perm[static_cast<std::size_t>(r)]);
      second.row(r) = data.row(perm[static_cast<std::size_t>(half + r)]);
    }

    const Gmm g1 = fit_gmm(first, k, derive_seed(cfg.seed, {kid, sid, 1}));
    const Gmm g2 = fit_gmm(second, k, derive_seed(cfg.seed, {kid, sid, 2}));
    result.records[ki].divergences[split] = js_divergence(
        g1, g2, cfg.mc_samples, derive_seed(cfg.seed, {kid, sid, 3}));
  });

  for (auto& record : result.records) {
    mean_and_std(record.divergences, record.mean, record.stddev);
  }
  result.k_star = arbitrate_k(result.records, cfg.alpha);
  return result;
}

}  // namespace lfd
