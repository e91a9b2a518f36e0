#include <doctest.h>

#include <cmath>

#include "lfd/gmr.hpp"
#include "lfd/rng.hpp"

namespace {

lfd::JointGmm single_component_model() {
  lfd::GaussianComponent comp;
  comp.prior = 1.0;
  comp.mean = Eigen::VectorXd(2);
  comp.mean << 1.0, 5.0;
  comp.covariance = Eigen::MatrixXd(2, 2);
  comp.covariance << 0.25, 0.2, 0.2, 1.0;
  return lfd::JointGmm{lfd::Gmm({comp}), 0, 0.0, 2.0};
}

// Aligned dataset of noisy copies of one smooth curve on a shared timeline.
lfd::AlignedDataset synthetic_aligned(int demos, int samples,
                                      std::uint64_t seed) {
  lfd::AlignedDataset aligned;
  aligned.reference_timestamps.resize(samples);
  for (int i = 0; i < samples; ++i) {
    aligned.reference_timestamps[i] = 3.0 * i / (samples - 1);
  }
  lfd::Rng rng(seed);
  for (int m = 0; m < demos; ++m) {
    Eigen::MatrixXd demo(samples, 2);
    for (int i = 0; i < samples; ++i) {
      const double t = aligned.reference_timestamps[i];
      demo(i, 0) = 20.0 * std::sin(t) + 0.3 * rng.normal();
      demo(i, 1) = 5.0 * t * t - 10.0 + 0.3 * rng.normal();
    }
    aligned.demos.push_back(std::move(demo));
    aligned.costs.push_back(0.0);
  }
  return aligned;
}

}  // namespace

TEST_CASE("single-component regression is the exact gaussian conditional") {
  const std::vector<lfd::JointGmm> models = {single_component_model()};
  const std::vector<double> times = {0.0, 0.5, 1.0, 1.5, 2.0};
  const lfd::GmrResult result = lfd::gmr(models, times);

  REQUIRE(result.trajectory.length() == 5);
  for (int i = 0; i < 5; ++i) {
    const double t = times[static_cast<std::size_t>(i)];
    const double expected_mean = 5.0 + (0.2 / 0.25) * (t - 1.0);
    const double expected_var = 1.0 - 0.2 * 0.2 / 0.25;
    CHECK(result.trajectory.means(i, 0) ==
          doctest::Approx(expected_mean).epsilon(1e-12));
    CHECK(result.variances(i, 0) ==
          doctest::Approx(expected_var).epsilon(1e-12));
  }
}

TEST_CASE("far-apart components dominate near their own centers") {
  lfd::GaussianComponent early, late;
  early.prior = 0.5;
  early.mean = Eigen::VectorXd(2);
  early.mean << 0.0, -10.0;
  early.covariance = Eigen::MatrixXd(2, 2);
  early.covariance << 0.1, 0.0, 0.0, 0.5;
  late = early;
  late.mean << 10.0, 30.0;

  const std::vector<lfd::JointGmm> models = {
      lfd::JointGmm{lfd::Gmm({early, late}), 0, 0.0, 10.0}};
  const lfd::GmrResult result = lfd::gmr(models, {0.0, 10.0});
  CHECK(result.trajectory.means(0, 0) == doctest::Approx(-10.0).epsilon(1e-6));
  CHECK(result.trajectory.means(1, 0) == doctest::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("regression recovers the underlying curve from noisy demos") {
  const lfd::AlignedDataset aligned = synthetic_aligned(5, 150, 13);
  const std::vector<lfd::JointGmm> models = lfd::fit_joint_gmms(aligned, 6, 3);
  REQUIRE(models.size() == 2);
  CHECK(models[0].joint == 0);
  CHECK(models[1].joint == 1);
  CHECK(models[0].t_min == aligned.reference_timestamps.front());
  CHECK(models[0].t_max == aligned.reference_timestamps.back());

  const lfd::GmrResult result = lfd::gmr_on_reference(models, aligned);
  REQUIRE(result.trajectory.length() == 150);

  // The regressed means should stay close to the noise-free curve away
  // from the boundaries, and the variances must be non-negative.
  double worst0 = 0.0, worst1 = 0.0;
  for (int i = 10; i < 140; ++i) {
    const double t = aligned.reference_timestamps[static_cast<std::size_t>(i)];
    worst0 = std::max(worst0, std::abs(result.trajectory.means(i, 0) -
                                       20.0 * std::sin(t)));
    worst1 = std::max(worst1, std::abs(result.trajectory.means(i, 1) -
                                       (5.0 * t * t - 10.0)));
  }
  CHECK(worst0 < 2.0);
  CHECK(worst1 < 2.0);
  CHECK(result.variances.minCoeff() >= 0.0);
  CHECK(result.variances.allFinite());
}

TEST_CASE("regression refuses to extrapolate") {
  const std::vector<lfd::JointGmm> models = {single_component_model()};
  CHECK_THROWS_AS(lfd::gmr(models, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(lfd::gmr(models, {2.4}), std::invalid_argument);
  // Rounding-level slack at the boundary is tolerated.
  CHECK_NOTHROW(lfd::gmr(models, {2.0 + 1e-12}));
}

TEST_CASE("regression output is deterministic") {
  const lfd::AlignedDataset aligned = synthetic_aligned(4, 80, 29);
  const auto models_a = lfd::fit_joint_gmms(aligned, 4, 55);
  const auto models_b = lfd::fit_joint_gmms(aligned, 4, 55);
  const lfd::GmrResult a = lfd::gmr_on_reference(models_a, aligned);
  const lfd::GmrResult b = lfd::gmr_on_reference(models_b, aligned);
  CHECK(a.trajectory.means == b.trajectory.means);
  CHECK(a.variances == b.variances);
}

TEST_CASE("fit rejects an empty dataset") {
  lfd::AlignedDataset empty;
  CHECK_THROWS_AS(lfd::fit_joint_gmms(empty, 3, 1), std::invalid_argument);
}
