#include "ballheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "ballheat/errors.hpp"

namespace ballheat {

GaussLegendre::GaussLegendre(int points) {
  if (points < 1) throw input_error("Gauss-Legendre rule needs at least one point");
  const int n = points;
  nodes_.resize(n);
  weights_.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double step = pn / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

const GaussLegendre& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<GaussLegendre>(points);
  return *slot;
}

SphereRule sphere_rule(int n, int polar, int azimuthal) {
  SphereRule rule;
  if (n == 1) {
    rule.points = {{-1.0}, {1.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (azimuthal < 1) throw input_error("sphere rule needs azimuthal points");
  const double h = 2.0 * std::numbers::pi / azimuthal;
  if (n == 2) {
    for (int j = 0; j < azimuthal; ++j) {
      const double phi = (j + 0.5) * h;
      rule.points.push_back({std::cos(phi), std::sin(phi)});
      rule.weights.push_back(h);
    }
    return rule;
  }
  if (n == 3) {
    const auto& gl = gauss_legendre(polar);
    for (int i = 0; i < gl.size(); ++i) {
      const double c = gl.nodes()[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < azimuthal; ++j) {
        const double phi = (j + 0.5) * h;
        rule.points.push_back({s * std::cos(phi), s * std::sin(phi), c});
        rule.weights.push_back(gl.weights()[i] * h);
      }
    }
    return rule;
  }
  throw input_error("sphere rules are implemented for n <= 3");
}

double sphere_area(int n) {
  if (n < 1) throw input_error("dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

}  // namespace ballheat
