#include <doctest.h>

#include <cmath>
#include <vector>

#include "lfd/metrics.hpp"
#include "lfd/rng.hpp"

namespace {

Eigen::MatrixXd wavy_trajectory(int rows, int cols, std::uint64_t seed) {
  lfd::Rng rng(seed);
  Eigen::MatrixXd out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    const double freq = 1.0 + 0.7 * j;
    const double phase = rng.uniform(0.0, 3.0);
    for (int i = 0; i < rows; ++i) {
      const double s = i / (rows - 1.0);
      out(i, j) = 30.0 * std::sin(freq * 6.28 * s + phase) + 10.0 * s;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("joint error is the mean absolute gap") {
  Eigen::VectorXd target(3), actual(3);
  target << 10.0, -5.0, 0.0;
  actual << 7.0, -5.0, 6.0;
  CHECK(lfd::joint_error(target, actual) == doctest::Approx(3.0));
  CHECK(lfd::joint_error(target, target) == 0.0);
  Eigen::VectorXd wrong(2);
  wrong << 0.0, 0.0;
  CHECK_THROWS_AS(lfd::joint_error(target, wrong), std::invalid_argument);
}

TEST_CASE("similarity is exactly 1 for any affine image") {
  const Eigen::MatrixXd ref = wavy_trajectory(120, 3, 5);
  Eigen::MatrixXd map(3, 3);
  map << 1.2, 0.3, 0.0, -0.5, 0.9, 0.1, 0.0, 0.2, 2.0;
  Eigen::RowVectorXd shift(3);
  shift << 15.0, -8.0, 100.0;
  const Eigen::MatrixXd candidate =
      (ref * map.transpose()).rowwise() + shift;
  CHECK(lfd::gmcc(ref, candidate) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lfd::gmcc(ref, ref) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("similarity drops for genuinely different shapes") {
  const Eigen::MatrixXd ref = wavy_trajectory(150, 2, 8);
  const Eigen::MatrixXd other = wavy_trajectory(150, 2, 9);
  const double score = lfd::gmcc(ref, other);
  CHECK(score >= 0.0);
  CHECK(score < 0.999);

  // Uncorrelated noise scores near zero against a smooth reference.
  lfd::Rng rng(11);
  Eigen::MatrixXd noise(150, 2);
  for (int i = 0; i < 150; ++i) {
    noise(i, 0) = rng.normal();
    noise(i, 1) = rng.normal();
  }
  CHECK(lfd::gmcc(ref, noise) < 0.3);
}

TEST_CASE("similarity is bounded in [0, 1] under heavy perturbation") {
  const Eigen::MatrixXd ref = wavy_trajectory(80, 2, 21);
  lfd::Rng rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd cand = ref;
    for (int i = 0; i < cand.rows(); ++i) {
      for (int j = 0; j < cand.cols(); ++j) {
        cand(i, j) += rng.normal(0.0, 40.0);
      }
    }
    const double score = lfd::gmcc(ref, cand);
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);
  }
}

TEST_CASE("a constant reference is rejected") {
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(50, 2, 3.0);
  const Eigen::MatrixXd cand = wavy_trajectory(50, 2, 3);
  CHECK_THROWS_AS(lfd::gmcc(flat, cand), std::invalid_argument);
  Eigen::MatrixXd short_cand = cand.topRows(49);
  CHECK_THROWS_AS(lfd::gmcc(cand, short_cand), std::invalid_argument);
}

TEST_CASE("linear resampling is exact on linear data") {
  const std::vector<double> src = {0.0, 1.0, 2.0, 4.0};
  Eigen::MatrixXd values(4, 2);
  for (int i = 0; i < 4; ++i) {
    const double t = src[static_cast<std::size_t>(i)];
    values(i, 0) = 3.0 * t - 1.0;
    values(i, 1) = -0.5 * t + 2.0;
  }
  const std::vector<double> dst = {0.0, 0.5, 1.7, 3.0, 4.0};
  const Eigen::MatrixXd out = lfd::resample_linear(src, values, dst);
  REQUIRE(out.rows() == 5);
  for (int i = 0; i < 5; ++i) {
    const double t = dst[static_cast<std::size_t>(i)];
    CHECK(out(i, 0) == doctest::Approx(3.0 * t - 1.0).epsilon(1e-12));
    CHECK(out(i, 1) == doctest::Approx(-0.5 * t + 2.0).epsilon(1e-12));
  }
}

TEST_CASE("resampling clamps queries outside the source range") {
  const std::vector<double> src = {1.0, 2.0};
  Eigen::MatrixXd values(2, 1);
  values << 5.0, 9.0;
  const Eigen::MatrixXd out =
      lfd::resample_linear(src, values, {0.0, 1.5, 3.0});
  CHECK(out(0, 0) == 5.0);
  CHECK(out(1, 0) == doctest::Approx(7.0));
  CHECK(out(2, 0) == 9.0);
}

TEST_CASE("timeline-mismatched similarity resamples the longer trajectory") {
  // The same curve sampled at two densities compares as identical.
  const int fine_n = 200, coarse_n = 70;
  std::vector<double> fine_t(fine_n), coarse_t(coarse_n);
  Eigen::MatrixXd fine(fine_n, 1), coarse(coarse_n, 1);
  for (int i = 0; i < fine_n; ++i) {
    fine_t[static_cast<std::size_t>(i)] = 2.0 * i / (fine_n - 1.0);
    fine(i, 0) = std::sin(3.0 * fine_t[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < coarse_n; ++i) {
    coarse_t[static_cast<std::size_t>(i)] = 2.0 * i / (coarse_n - 1.0);
    coarse(i, 0) = std::sin(3.0 * coarse_t[static_cast<std::size_t>(i)]);
  }
  const double score = lfd::gmcc_resampled(fine_t, fine, coarse_t, coarse);
  CHECK(score == doctest::Approx(1.0).epsilon(1e-4));
}
