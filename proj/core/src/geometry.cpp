#include "ballheat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ballheat/errors.hpp"

namespace ballheat {

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_same_dimension(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw input_error("empty point");
  if (a.size() != b.size()) {
    throw input_error("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  }
}

BallPoint::BallPoint(Vector coords) : coords_(std::move(coords)), radius_(norm(coords_)) {
  if (coords_.empty()) throw input_error("empty point");
  if (!(radius_ < 1.0)) throw domain_error("point is not inside the open unit ball");
}

BoundaryPoint::BoundaryPoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw input_error("empty point");
  if (std::abs(norm(coords_) - 1.0) > kSphereTolerance) {
    throw domain_error("point is not on the unit sphere");
  }
}

BoundaryPoint BoundaryPoint::project(std::span<const double> v) {
  const double r = norm(v);
  if (r == 0.0) throw domain_error("cannot project the origin onto the sphere");
  Vector z(v.begin(), v.end());
  for (double& c : z) c /= r;
  return BoundaryPoint(std::move(z));
}

HalfSpace::HalfSpace(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (normal_.empty()) throw input_error("empty normal");
  if (std::abs(norm(normal_) - 1.0) > kSphereTolerance) {
    throw input_error("half-space normal must be a unit vector");
  }
}

HalfSpace HalfSpace::tangent_at(std::span<const double> x) {
  const double r = norm(x);
  if (r == 0.0) throw domain_error("tangent half-space undefined at the origin");
  Vector u(x.begin(), x.end());
  for (double& c : u) c /= r;
  // Renormalise so the unit-normal check holds to the last bit.
  const double s = norm(u);
  for (double& c : u) c /= s;
  return HalfSpace(std::move(u), 1.0);
}

double HalfSpace::signed_distance(std::span<const double> x) const {
  return offset_ - dot(x, normal_);
}

namespace {

struct BoundaryDistance {
  std::span<const double> x;

  double operator()(const UnitBall&) const {
    const double d = 1.0 - norm(x);
    if (d < 0.0) throw domain_error("point outside the unit ball");
    return d;
  }
  double operator()(const HalfSpace& h) const {
    const double d = h.signed_distance(x);
    if (d < 0.0) throw domain_error("point outside the half-space");
    return d;
  }
  double operator()(const Interval& iv) const {
    if (x.size() != 1) throw input_error("interval domain needs a one-dimensional point");
    if (!(iv.lo < iv.hi)) throw input_error("empty interval");
    if (x[0] < iv.lo || x[0] > iv.hi) throw domain_error("point outside the interval");
    return std::min(x[0] - iv.lo, iv.hi - x[0]);
  }
};

}  // namespace

double boundary_distance(std::span<const double> x, const Domain& domain) {
  if (x.empty()) throw input_error("empty point");
  return std::visit(BoundaryDistance{x}, domain);
}

double angle(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x, y);
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  // 2 atan2(| |y|x - |x|y |, | |y|x + |x|y |) stays accurate near 0 and pi.
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = ny * x[i];
    const double b = nx * y[i];
    diff += (a - b) * (a - b);
    sum += (a + b) * (a + b);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

Vector reflect_hyperplane(std::span<const double> x, const Hyperplane& plane) {
  require_same_dimension(x, plane.normal);
  if (std::abs(norm(plane.normal) - 1.0) > kSphereTolerance) {
    throw input_error("hyperplane normal must be a unit vector");
  }
  const double shift = 2.0 * (plane.offset - dot(x, plane.normal));
  Vector out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += shift * plane.normal[i];
  return out;
}

Vector reflect_tangent(std::span<const double> x) {
  const double r = norm(x);
  if (r == 0.0) throw domain_error("tangent reflection undefined at the origin");
  const double scale = (2.0 - r) / r;
  Vector out(x.begin(), x.end());
  for (double& c : out) c *= scale;
  return out;
}

}  // namespace ballheat
