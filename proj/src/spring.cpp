#include "lfd/spring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lfd {

namespace {

constexpr double kSilentAmplitude = 1e-6;
constexpr double kWeightRidge = 1e-12;

// Central differences on a non-uniform grid, one-sided at the ends.
Eigen::VectorXd differentiate(const std::vector<double>& t,
                              const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd dy(n);
  dy[0] = (y[1] - y[0]) / (t[1] - t[0]);
  for (int i = 1; i < n - 1; ++i) {
    dy[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  dy[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  return dy;
}

}  // namespace

double default_phase_decay() { return std::log(100.0); }

double canonical_phase(double t, double tau, double alpha_x) {
  return std::exp(-alpha_x * t / tau);
}

double ForcingTerm::value(double x, double amplitude) const {
  if (silent) return 0.0;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double dx = x - centers[i];
    const double psi = std::exp(-widths[i] * dx * dx);
    num += psi * weights[i];
    den += psi;
  }
  // den > 0 always: every kernel is positive at any finite phase.
  return num / den * x * amplitude;
}

ForcingTerm make_forcing_basis(int n_basis, double alpha_x) {
  if (n_basis < 2) {
    throw std::invalid_argument("forcing basis: needs at least 2 kernels");
  }
  ForcingTerm term;
  term.alpha_x = alpha_x;
  term.centers.resize(n_basis);
  term.widths.resize(n_basis);
  term.weights = Eigen::VectorXd::Zero(n_basis);
  for (int i = 0; i < n_basis; ++i) {
    term.centers[i] =
        std::exp(-alpha_x * static_cast<double>(i) / (n_basis - 1));
  }
  for (int i = 0; i < n_basis - 1; ++i) {
    const double gap = term.centers[i + 1] - term.centers[i];
    term.widths[i] = 1.0 / (gap * gap);
  }
  term.widths[n_basis - 1] = term.widths[n_basis - 2];
  return term;
}

SpringModel fit_spring(const std::vector<double>& timestamps,
                       const Eigen::VectorXd& y, double alpha_z,
                       int n_basis) {
  const int t_count = static_cast<int>(timestamps.size());
  if (t_count < 3) {
    throw std::invalid_argument("spring fit: needs at least 3 samples");
  }
  if (y.size() != t_count) {
    throw std::invalid_argument("spring fit: series length mismatch");
  }
  if (!(alpha_z > 0.0)) {
    throw std::invalid_argument("spring fit: alpha_z must be positive");
  }
  for (int i = 1; i < t_count; ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument(
          "spring fit: timestamps not strictly increasing");
    }
  }

  SpringModel model;
  model.alpha_z = alpha_z;
  model.beta_z = alpha_z * 0.25;
  model.tau = timestamps.back() - timestamps.front();
  model.y0 = y[0];
  model.g = y[t_count - 1];
  model.forcing = make_forcing_basis(n_basis, default_phase_decay());

  const double amplitude = model.g - model.y0;
  if (std::abs(amplitude) < kSilentAmplitude) {
    model.forcing.silent = true;
    return model;
  }

  const Eigen::VectorXd dy = differentiate(timestamps, y);
  const Eigen::VectorXd ddy = differentiate(timestamps, dy);

  // Forcing value the spring would have needed at each sample:
  // f* = tau^2 y'' - alpha_z (beta_z (g - y) - tau y').
  const double tau = model.tau;
  Eigen::VectorXd target(t_count);
  Eigen::VectorXd phase(t_count);
  for (int i = 0; i < t_count; ++i) {
    const double ti = timestamps[i] - timestamps.front();
    phase[i] = canonical_phase(ti, tau, model.forcing.alpha_x);
    target[i] = tau * tau * ddy[i] -
                alpha_z * (model.beta_z * (model.g - y[i]) - tau * dy[i]);
  }

  // Per-kernel locally weighted regression of target on s = x * amplitude.
  for (int b = 0; b < n_basis; ++b) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < t_count; ++i) {
      const double dx = phase[i] - model.forcing.centers[b];
      const double psi = std::exp(-model.forcing.widths[b] * dx * dx);
      const double s = phase[i] * amplitude;
      num += psi * s * target[i];
      den += psi * s * s;
    }
    model.forcing.weights[b] = num / (den + kWeightRidge);
  }
  return model;
}

Rollout rollout(const SpringModel& model, double y0, double g, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rollout: dt must be positive");
  }
  if (!(model.tau > 0.0)) {
    throw std::invalid_argument("rollout: tau must be positive");
  }
  const int steps = static_cast<int>(std::ceil(model.tau / dt));

  Rollout out;
  out.timestamps.resize(steps + 1);
  out.y.resize(steps + 1);
  out.z.resize(steps + 1);

  const double amplitude = g - y0;
  double y = y0;
  double z = 0.0;
  for (int i = 0; i <= steps; ++i) {
    out.timestamps[i] = i * dt;
    out.y[i] = y;
    out.z[i] = z;
    if (i == steps) break;
    const double x = canonical_phase(out.timestamps[i], model.tau,
                                     model.forcing.alpha_x);
    const double f = model.forcing.value(x, amplitude);
    const double zdot =
        (model.alpha_z * (model.beta_z * (g - y) - z) + f) / model.tau;
    const double ydot = z / model.tau;
    y += dt * ydot;
    z += dt * zdot;
  }
  return out;
}

Eigen::VectorXd rollout_at(const SpringModel& model, double y0, double g,
                           const std::vector<double>& timestamps) {
  const int t_count = static_cast<int>(timestamps.size());
  if (t_count < 2) {
    throw std::invalid_argument("rollout: needs at least 2 timestamps");
  }
  for (int i = 1; i < t_count; ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument("rollout: timestamps not strictly increasing");
    }
  }

  Eigen::VectorXd out(t_count);
  const double t0 = timestamps.front();
  const double amplitude = g - y0;
  double y = y0;
  double z = 0.0;
  for (int i = 0; i < t_count; ++i) {
    out[i] = y;
    if (i == t_count - 1) break;
    const double dt = timestamps[i + 1] - timestamps[i];
    const double x =
        canonical_phase(timestamps[i] - t0, model.tau, model.forcing.alpha_x);
    const double f = model.forcing.value(x, amplitude);
    const double zdot =
        (model.alpha_z * (model.beta_z * (g - y) - z) + f) / model.tau;
    const double ydot = z / model.tau;
    y += dt * ydot;
    z += dt * zdot;
  }
  return out;
}

}  // namespace lfd
