#include "ballheat/envelopes.hpp"

#include <algorithm>
#include <cmath>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/geometry.hpp"

namespace ballheat {

namespace {

// 1 - |x| clamped to [0, 1]; a point outside the closed ball is an input error.
double depth(std::span<const double> x) {
  const double r = norm(x);
  if (r > 1.0 + kSphereTolerance) throw input_error("point outside the closed unit ball");
  return std::max(0.0, 1.0 - r);
}

void check_time(double t) {
  if (!(t > 0) || !std::isfinite(t)) throw input_error("time must be positive");
}

}  // namespace

double h_factor(double t, std::span<const double> x, std::span<const double> y) {
  check_time(t);
  require_same_dimension(x, y);
  const double dx = depth(x);
  const double dy = depth(y);
  const double d2 = distance(x, y) * distance(x, y);
  const double first = std::min(1.0, dx * dy / t);
  const double second = std::min(1.0, dx * d2 / t) * std::min(1.0, dy * d2 / t);
  return first + second;
}

double sharp_shape(double t, std::span<const double> x, std::span<const double> y) {
  const double h = h_factor(t, x, y);
  const double d = distance(x, y);
  const double n = static_cast<double>(x.size());
  return h * std::pow(t, -n / 2.0) * std::exp(-d * d / (4.0 * t));
}

double global_shape(double t, std::span<const double> x, std::span<const double> y) {
  check_time(t);
  const double tc = std::min(t, 1.0);
  const double h = h_factor(tc, x, y);
  const double d = distance(x, y);
  const int n = static_cast<int>(x.size());
  return h * std::pow(tc, -n / 2.0) * std::exp(-d * d / (4.0 * t) - lambda1(n) * t);
}

double q_shape(double t, std::span<const double> x, std::span<const double> z) {
  check_time(t);
  require_same_dimension(x, z);
  const double dx = depth(x);
  if (!(dx > 0)) throw input_error("start point must lie inside the ball");
  if (std::abs(norm(z) - 1.0) > 1e-12) throw input_error("exit point must lie on the unit sphere");
  const double d2 = distance(x, z) * distance(x, z);
  const double factor = dx / t + (d2 / t) * std::min(1.0, dx * d2 / t);
  return factor * gauss_kernel(t, x, z);
}

double interval_shape(double t, double x, double y) {
  check_time(t);
  if (x < -1 || x > 1 || y < -1 || y > 1) throw input_error("point outside [-1, 1]");
  const double a = std::min(1.0, (x + 1) * (y + 1) / t);
  const double b = std::min(1.0, (1 - x) * (1 - y) / t);
  return a * b / std::sqrt(t) * std::exp(-(x - y) * (x - y) / (4.0 * t));
}

double davies_zhang_shape(double t, std::span<const double> x, std::span<const double> y,
                          double c_exp) {
  check_time(t);
  if (!(c_exp > 0)) throw input_error("exponent constant must be positive");
  require_same_dimension(x, y);
  const double first = std::min(1.0, depth(x) * depth(y) / t);
  const double d = distance(x, y);
  const double n = static_cast<double>(x.size());
  return first * std::pow(t, -n / 2.0) * std::exp(-d * d / (c_exp * t));
}

}  // namespace ballheat
