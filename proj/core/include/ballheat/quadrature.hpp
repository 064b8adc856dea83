#pragma once

#include <cstddef>
#include <vector>

#include "ballheat/geometry.hpp"

namespace ballheat {

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int points);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
    return half * s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared, lazily built rule; safe to call from several threads.
const GaussLegendre& gauss_legendre(int points);

/// Product rule on the unit sphere S^{n-1} for n = 1, 2, 3. Weights sum to the
/// surface measure (2, 2 pi, 4 pi).
struct SphereRule {
  std::vector<Vector> points;
  std::vector<double> weights;
};

/// n = 2 uses `azimuthal` equispaced angles; n = 3 uses Gauss-Legendre in the
/// polar cosine times `azimuthal` equispaced longitudes. `polar` is ignored
/// for n < 3.
SphereRule sphere_rule(int n, int polar, int azimuthal);

/// Surface measure of S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Volume of the unit ball in R^n.
double ball_volume(int n);

}  // namespace ballheat
