#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lfd/rng.hpp"

namespace lfd {

struct GaussianComponent {
  double prior = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// An immutable Gaussian mixture. The constructor validates priors and
// factorizes every covariance once, so evaluation and sampling are cheap.
class Gmm {
 public:
  explicit Gmm(std::vector<GaussianComponent> components);

  int dim() const { return static_cast<int>(components_[0].mean.size()); }
  int size() const { return static_cast<int>(components_.size()); }
  const std::vector<GaussianComponent>& components() const {
    return components_;
  }

  double log_density(const Eigen::VectorXd& x) const;

  // Log mixture density for every row of xs.
  Eigen::VectorXd log_densities(const Eigen::MatrixXd& xs) const;

  // count draws, one per row. Every draw consumes one uniform (component
  // choice) plus dim() normals, independent of which component is hit, so
  // two streams with the same seed stay in lockstep across mixtures.
  Eigen::MatrixXd sample(int count, Rng& rng) const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<Eigen::MatrixXd> chol_lower_;  // L with L L^T = covariance
  std::vector<double> log_weight_;  // log prior - 0.5 d log(2 pi) - log det L
  std::vector<double> cum_prior_;
};

struct EmFit {
  Gmm model;
  std::vector<double> log_likelihood;  // total data LL after each E step
  int iterations = 0;
  bool converged = false;
};

// Fits a k-component mixture by EM: k-means++ seeding, one hard-assignment
// pass, then standard EM until the relative log-likelihood gain drops below
// 1e-6 or 300 iterations. Covariances get 1e-6 * (average data variance)
// added to the diagonal each M step; components whose prior collapses below
// 1e-8 are re-seeded at the worst-explained point.
EmFit fit_gmm_detailed(const Eigen::MatrixXd& data, int k, std::uint64_t seed);
Gmm fit_gmm(const Eigen::MatrixXd& data, int k, std::uint64_t seed);

}  // namespace lfd
