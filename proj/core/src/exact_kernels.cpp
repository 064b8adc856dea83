#include "ballheat/exact_kernels.hpp"

#include <cmath>
#include <numbers>

#include "ballheat/quadrature.hpp"

namespace ballheat {

double gauss_kernel(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw input_error("time must be positive");
  require_same_dimension(x, y);
  const double n = static_cast<double>(x.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  return std::exp(-d2 / (4.0 * t)) * std::pow(4.0 * std::numbers::pi * t, -0.5 * n);
}

double halfspace_kernel(double t, std::span<const double> x, std::span<const double> y,
                        const HalfSpace& h) {
  if (!(t > 0.0)) throw input_error("time must be positive");
  require_same_dimension(x, y);
  require_same_dimension(x, h.normal());
  const double dx = h.signed_distance(x);
  const double dy = h.signed_distance(y);
  if (dx < 0.0 || dy < 0.0) throw input_error("point outside the closed half-space");
  return gauss_kernel(t, x, y) * -std::expm1(-dx * dy / t);
}

namespace {

constexpr int kRadialNodes = 64;
constexpr int kCircleNodes = 128;
constexpr int kPolarNodes = 32;

}  // namespace

double midpoint_mass(double t, std::span<const double> x, std::span<const double> y,
                     std::span<const double> a, double c) {
  if (!(t > 0.0)) throw input_error("time must be positive");
  if (!(c > 0.0)) throw input_error("ball radius factor c must be positive");
  require_same_dimension(x, y);
  require_same_dimension(x, a);
  const int n = static_cast<int>(x.size());
  if (n > 3) throw input_error("midpoint_mass quadrature supports n <= 3");

  const double rho = c * std::sqrt(t);
  const auto& radial = gauss_legendre(kRadialNodes);
  Vector z(n);
  auto integrand = [&](std::span<const double> p) {
    return gauss_kernel(t, x, p) * gauss_kernel(t, p, y);
  };

  if (n == 1) {
    return radial.integrate([&](double s) {
      z[0] = a[0] + s;
      return integrand(z);
    }, -rho, rho);
  }

  const SphereRule sphere = sphere_rule(n, kPolarNodes, n == 2 ? kCircleNodes : 2 * kPolarNodes);
  double total = 0.0;
  for (int i = 0; i < radial.size(); ++i) {
    const double r = 0.5 * rho * (radial.nodes()[i] + 1.0);
    const double wr = 0.5 * rho * radial.weights()[i] * std::pow(r, n - 1);
    double shell = 0.0;
    for (std::size_t j = 0; j < sphere.points.size(); ++j) {
      for (int d = 0; d < n; ++d) z[d] = a[d] + r * sphere.points[j][d];
      shell += sphere.weights[j] * integrand(z);
    }
    total += wr * shell;
  }
  return total;
}

}  // namespace ballheat
