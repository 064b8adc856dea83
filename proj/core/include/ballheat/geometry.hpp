#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace ballheat {

using Vector = std::vector<double>;

inline constexpr double kSphereTolerance = 1e-14;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);

/// Throws input_error unless both spans have the same, nonzero length.
void require_same_dimension(std::span<const double> a, std::span<const double> b);

/// A point of the open unit ball B(0,1).
class BallPoint {
 public:
  explicit BallPoint(Vector coords);

  std::span<const double> coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double radius() const { return radius_; }
  /// 1 - |x|, always in (0, 1].
  double boundary_distance() const { return 1.0 - radius_; }

 private:
  Vector coords_;
  double radius_;
};

/// A point of the unit sphere S(0,1).
class BoundaryPoint {
 public:
  explicit BoundaryPoint(Vector coords);
  /// Radial projection of a nonzero vector onto the sphere.
  static BoundaryPoint project(std::span<const double> v);

  std::span<const double> coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

 private:
  Vector coords_;
};

/// The hyperplane {x : x.normal = offset}.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

/// The half-space {x : x.normal < offset}; normal points outward.
class HalfSpace {
 public:
  HalfSpace(Vector normal, double offset);
  /// Half-space containing the unit ball whose boundary touches S(0,1) at x/|x|.
  static HalfSpace tangent_at(std::span<const double> x);

  std::span<const double> normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return normal_.size(); }
  Hyperplane boundary() const { return {normal_, offset_}; }
  /// offset - x.normal; negative outside.
  double signed_distance(std::span<const double> x) const;

 private:
  Vector normal_;
  double offset_;
};

struct UnitBall {};

/// The interval (lo, hi) as a one-dimensional domain.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

using Domain = std::variant<UnitBall, HalfSpace, Interval>;

/// Distance from x to the boundary of D. Points on the boundary give 0, points
/// outside throw domain_error.
double boundary_distance(std::span<const double> x, const Domain& domain);

/// The smaller angle between x and y in [0, pi]; 0 when either is zero.
double angle(std::span<const double> x, std::span<const double> y);

/// Mirror image of x in the hyperplane L. The normal must be a unit vector.
Vector reflect_hyperplane(std::span<const double> x, const Hyperplane& plane);

/// Reflection of x in the hyperplane tangent to S(0,1) at x/|x|:
/// ((2 - |x|)/|x|) x. Undefined at the origin.
Vector reflect_tangent(std::span<const double> x);

}  // namespace ballheat
