#include <doctest.h>

#include <cmath>
#include <vector>

#include "lfd/rng.hpp"
#include "lfd/spring.hpp"

namespace {

double min_jerk(double s) {
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// Critically damped response from rest: y(t) = g + (y0 - g)(1 + kt)e^{-kt}
// with k = alpha_z / (2 tau).
double analytic_unforced(double t, double y0, double g, double alpha_z,
                         double tau) {
  const double k = alpha_z / (2.0 * tau);
  return g + (y0 - g) * (1.0 + k * t) * std::exp(-k * t);
}

lfd::SpringModel unforced_model(double alpha_z, double tau) {
  lfd::SpringModel model;
  model.tau = tau;
  model.alpha_z = alpha_z;
  model.beta_z = alpha_z / 4.0;
  model.forcing = lfd::make_forcing_basis(5, lfd::default_phase_decay());
  model.forcing.silent = true;
  return model;
}

}  // namespace

TEST_CASE("phase starts at 1 and reaches 0.01 at t = tau") {
  const double ax = lfd::default_phase_decay();
  CHECK(lfd::canonical_phase(0.0, 2.0, ax) == 1.0);
  CHECK(lfd::canonical_phase(2.0, 2.0, ax) == doctest::Approx(0.01));
  CHECK(lfd::canonical_phase(1.0, 2.0, ax) == doctest::Approx(0.1));
}

TEST_CASE("unforced rollout matches the analytic critically damped response") {
  const double alpha_z = 25.0, tau = 1.5, y0 = -1.0, g = 1.0;
  const lfd::SpringModel model = unforced_model(alpha_z, tau);
  const lfd::Rollout out = lfd::rollout(model, y0, g, 1e-4);
  double worst = 0.0;
  for (std::size_t i = 0; i < out.timestamps.size(); ++i) {
    const double ref = analytic_unforced(out.timestamps[i], y0, g, alpha_z, tau);
    worst = std::max(worst, std::abs(out.y(static_cast<int>(i)) - ref));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("unforced rollout never overshoots and converges to the goal") {
  for (double alpha_z : {20.0, 35.0, 60.0}) {
    CAPTURE(alpha_z);
    const lfd::SpringModel model = unforced_model(alpha_z, 2.0);
    const lfd::Rollout out = lfd::rollout(model, 10.0, -50.0, 1e-3);
    // y starts above the goal and must stay on that side.
    for (int i = 0; i < out.y.size(); ++i) CHECK(out.y(i) >= -50.0);
    const double amp = 60.0;
    CHECK(std::abs(out.y(out.y.size() - 1) + 50.0) < 1e-3 * amp);
  }
}

TEST_CASE("basis centers descend through (0, 1] with positive widths") {
  const lfd::ForcingTerm basis =
      lfd::make_forcing_basis(20, lfd::default_phase_decay());
  REQUIRE(basis.size() == 20);
  CHECK(basis.centers(0) == 1.0);
  for (int i = 1; i < 20; ++i) {
    CHECK(basis.centers(i) < basis.centers(i - 1));
    CHECK(basis.centers(i) > 0.0);
  }
  CHECK(basis.widths.minCoeff() > 0.0);
  CHECK(basis.widths(19) == basis.widths(18));
  CHECK(basis.weights.isZero(0.0));
  CHECK(basis.value(0.5, 3.0) == 0.0);
  CHECK_THROWS_AS(lfd::make_forcing_basis(1, lfd::default_phase_decay()),
                  std::invalid_argument);
}

TEST_CASE("forcing is a weighted average scaled by phase and amplitude") {
  lfd::ForcingTerm basis =
      lfd::make_forcing_basis(12, lfd::default_phase_decay());
  lfd::Rng rng(77);
  for (int i = 0; i < basis.size(); ++i) basis.weights(i) = rng.normal(0.0, 40.0);
  const double bound = basis.weights.cwiseAbs().maxCoeff();
  for (double x : {1.0, 0.6, 0.3, 0.05, 0.01}) {
    const double f = basis.value(x, 2.5);
    CHECK(std::abs(f) <= bound * x * 2.5 + 1e-12);
  }
  // Linear in the amplitude.
  CHECK(basis.value(0.4, 5.0) == doctest::Approx(2.0 * basis.value(0.4, 2.5)));
}

TEST_CASE("fit yields exact critical damping and the demo's endpoints") {
  std::vector<double> ts(200);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    ts[static_cast<std::size_t>(i)] = 1.8 * i / 199.0;
    y(i) = -30.0 + 75.0 * min_jerk(i / 199.0);
  }
  const lfd::SpringModel model = lfd::fit_spring(ts, y, 25.0, 30);
  CHECK(model.beta_z == 0.25 * model.alpha_z);
  CHECK(model.tau == doctest::Approx(1.8));
  CHECK(model.y0 == -30.0);
  CHECK(model.g == 45.0);
  CHECK_FALSE(model.forcing.silent);
}

TEST_CASE("fitted spring reproduces a minimum-jerk stroke") {
  const int n = 400;
  std::vector<double> ts(n);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] = 2.0 * i / (n - 1.0);
    y(i) = -30.0 + 75.0 * min_jerk(i / (n - 1.0));
  }
  const lfd::SpringModel model = lfd::fit_spring(ts, y, 25.0, 30);
  const Eigen::VectorXd replay = lfd::rollout_at(model, -30.0, 45.0, ts);
  const double sup = (replay - y).cwiseAbs().maxCoeff();
  const double rms = std::sqrt((replay - y).squaredNorm() / n);
  CHECK(sup < 1.5);
  CHECK(rms < 0.75);
  CHECK(std::abs(replay(n - 1) - 45.0) < 0.5);
}

TEST_CASE("a degenerate stroke fits a silent forcing term") {
  std::vector<double> ts(50);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(50, 12.5);
  for (int i = 0; i < 50; ++i) ts[static_cast<std::size_t>(i)] = 0.02 * i;
  const lfd::SpringModel model = lfd::fit_spring(ts, y, 25.0, 10);
  CHECK(model.forcing.silent);
  const lfd::Rollout out = lfd::rollout(model, 12.5, 12.5, 1e-3);
  CHECK(out.y.minCoeff() == 12.5);
  CHECK(out.y.maxCoeff() == 12.5);
}

TEST_CASE("generation rescales exactly with new endpoints") {
  const int n = 300;
  std::vector<double> ts(n);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double s = i / (n - 1.0);
    ts[static_cast<std::size_t>(i)] = 2.2 * s;
    y(i) = 10.0 + 50.0 * min_jerk(s) + 8.0 * std::sin(3.14159 * s);
  }
  const lfd::SpringModel model = lfd::fit_spring(ts, y, 30.0, 25);
  const lfd::Rollout base = lfd::rollout(model, 10.0, 60.0, 1e-3);
  // New endpoints with twice the amplitude: the path is the affine image
  // of the base rollout because the system is linear and the forcing
  // scales with g - y0.
  const lfd::Rollout wide = lfd::rollout(model, -5.0, 95.0, 1e-3);
  REQUIRE(base.y.size() == wide.y.size());
  const double scale = 100.0 / 50.0;
  for (int i = 0; i < base.y.size(); ++i) {
    const double expected = -5.0 + scale * (base.y(i) - 10.0);
    CHECK(wide.y(i) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("fit and rollout reject malformed inputs") {
  std::vector<double> ts = {0.0, 0.1, 0.2};
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, 2.0;
  CHECK_THROWS_AS(lfd::fit_spring({0.0, 0.1}, y, 25.0, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(lfd::fit_spring(ts, y, -1.0, 5), std::invalid_argument);
  const lfd::SpringModel model = lfd::fit_spring(ts, y, 25.0, 2);
  CHECK_THROWS_AS(lfd::rollout(model, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lfd::rollout_at(model, 0.0, 1.0, {0.0, 0.2, 0.1}),
                  std::invalid_argument);
}
