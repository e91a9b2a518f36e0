#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lfd {

// Decay rate of the canonical phase, chosen so the phase reaches 0.01 at
// t = tau.
double default_phase_decay();

// Canonical phase x(t) = exp(-alpha_x * t / tau), 1 at t = 0.
double canonical_phase(double t, double tau, double alpha_x);

// Radial basis forcing term on the canonical phase. Centers are spread as
// the phase values of equally spaced times, so they bunch where the phase
// moves fastest; widths are the inverse squared gaps between neighbors.
struct ForcingTerm {
  double alpha_x = 0.0;
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;
  Eigen::VectorXd weights;
  // Set when the fitted motion's amplitude was too small to scale the
  // forcing reliably; the term then evaluates to zero.
  bool silent = false;

  int size() const { return static_cast<int>(centers.size()); }

  // f(x) = (sum_i psi_i w_i / sum_i psi_i) * x * amplitude, where
  // amplitude = g - y0 of the motion being generated.
  double value(double x, double amplitude) const;
};

// Basis layout for n_basis >= 2 kernels; weights start at zero.
ForcingTerm make_forcing_basis(int n_basis, double alpha_x);

// One joint's damped spring: tau * dz/dt = alpha_z * (beta_z (g - y) - z) + f,
// tau * dy/dt = z, with beta_z = alpha_z / 4 (critical damping).
struct SpringModel {
  double tau = 1.0;
  double alpha_z = 25.0;
  double beta_z = 6.25;
  double y0 = 0.0;  // endpoints seen at fit time; rollouts may override
  double g = 0.0;
  ForcingTerm forcing;
};

// Fits the forcing weights so the spring reproduces y(t) on its timeline.
// tau becomes the timeline's span, y0 and g its endpoints. Derivatives are
// central finite differences on the (possibly non-uniform) grid; weights
// come from per-kernel locally weighted regression on the forcing residual.
// Motions with |g - y0| below 1e-6 get a silent forcing term.
SpringModel fit_spring(const std::vector<double>& timestamps,
                       const Eigen::VectorXd& y, double alpha_z, int n_basis);

struct Rollout {
  std::vector<double> timestamps;  // 0, dt, ..., ceil(tau/dt) * dt
  Eigen::VectorXd y;
  Eigen::VectorXd z;  // scaled velocity, dy/dt = z / tau
};

// Explicit Euler integration from (y0, z=0) over the model's duration.
Rollout rollout(const SpringModel& model, double y0, double g, double dt);

// Euler integration stepping exactly on the given timestamps (absolute, as
// at fit time). Used to compare a rollout against a reference trajectory
// without interpolating.
Eigen::VectorXd rollout_at(const SpringModel& model, double y0, double g,
                           const std::vector<double>& timestamps);

}  // namespace lfd
