#include "lfd/studentt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lfd {

namespace {

constexpr int kMaxLentzIterations = 300;
constexpr double kLentzEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for the incomplete beta function (modified Lentz).
// Valid for x < (a + 1) / (a + b + 2); the caller flips arguments to land
// in that region.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= kMaxLentzIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kLentzEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta did not converge for a=" +
                           std::to_string(a) + " b=" + std::to_string(b) +
                           " x=" + std::to_string(x));
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta: a and b must be positive");
  }
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw std::invalid_argument("incomplete beta: x must be in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) {
    throw std::invalid_argument("student t: df must be positive");
  }
  if (std::isnan(t)) {
    throw std::invalid_argument("student t: t is NaN");
  }
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  if (t == 0.0) return 0.5;

  // P(|T| > |t|) = I_x(df/2, 1/2) with x = df / (df + t^2).
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

}  // namespace lfd
