#pragma once

namespace lfd {

// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
// x in [0, 1], evaluated with a modified Lentz continued fraction.
// Converges to near machine precision for the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of Student's t distribution with df > 0 degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace lfd
