#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lfd/gmm.hpp"

namespace lfd {

// Monte Carlo Jensen-Shannon divergence estimate in nats, clamped to the
// valid range [0, ln 2]. std_error is the standard error of the paired
// per-sample estimator, suitable for confidence intervals on the estimate.
struct JsEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Both mixtures are sampled with identical uniform streams derived from
// seed, which makes the estimate exactly symmetric in its arguments.
JsEstimate js_divergence_detailed(const Gmm& p, const Gmm& q, int mc_samples,
                                  std::uint64_t seed);
double js_divergence(const Gmm& p, const Gmm& q, int mc_samples,
                     std::uint64_t seed);

// One-tailed Welch p-value for H0: mean_a - mean_b <= 0 against
// H1: mean_a - mean_b > 0. Small p means a's mean is credibly larger.
// Inputs are sample means, sample standard deviations (n-1 denominator),
// and sample counts of at least 2.
double welch_one_tailed_p(double mean_a, double std_a, int n_a, double mean_b,
                          double std_b, int n_b);

// Split-half stability record for one candidate component count.
struct SelectionRecord {
  int k = 0;
  std::vector<double> divergences;  // one JS estimate per split
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct SelectionConfig {
  int k_min = 2;
  int k_max = 9;
  int splits = 50;          // random half/half splits per candidate k
  int mc_samples = 2000;    // JS Monte Carlo draws per mixture
  double alpha = 0.05;      // test level for the Welch comparisons
  std::uint64_t seed = 0;
};

struct SelectionResult {
  int k_star = 0;
  std::vector<SelectionRecord> records;  // ascending k
};

// Statistical arbitration between candidate counts: starting from the
// lowest-mean candidate, a challenger k replaces the incumbent only when
// the incumbent's mean is credibly larger (one-tailed Welch test at level
// alpha), or when neither direction is credible and the challenger has the
// smaller standard deviation. Candidates whose mean is credibly larger than
// the incumbent's never win. Scans records in ascending k order.
int arbitrate_k(const std::vector<SelectionRecord>& records, double alpha);

// Picks the component count whose half-vs-half refits are most stable.
// For every k, the rows of data are split 50/50 `splits` times; both halves
// are fitted with k components and their JS divergence recorded. All
// randomness is keyed off cfg.seed per (k, split), so results do not depend
// on thread count.
SelectionResult select_k(const Eigen::MatrixXd& data,
                         const SelectionConfig& cfg);

}  // namespace lfd
