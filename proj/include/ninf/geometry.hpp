#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace ninf {

/// Points live in the plane; one-dimensional domains use the first coordinate
/// and keep the second at zero.
using Point = Eigen::Vector2d;

struct Interval {
  double lo;
  double hi;
};

struct Ball {
  Point center;
  double radius;
};

struct Ellipse {
  Point center;
  Eigen::Vector2d semi_axes;  // along x and y
};

struct Polygon {
  std::vector<Point> vertices;  // counterclockwise
};

struct BoundingBox {
  Point min;
  Point max;
};

struct InteriorSphere {
  bool holds;
  double radius;
};

/// A bounded open convex region of R or R^2.
///
/// The stored shape is optionally thickened by a rounding margin: the region
/// is then the Minkowski sum of the shape with an open ball of that radius.
/// Outer parallel bodies are represented this way, which keeps distance
/// queries exact (the signed distance of a thickened convex body is the
/// signed distance of its core minus the margin).
class ConvexDomain {
 public:
  using Shape = std::variant<Interval, Ball, Ellipse, Polygon>;

  static ConvexDomain interval(double lo, double hi);
  static ConvexDomain ball(const Point& center, double radius);
  static ConvexDomain ellipse(const Point& center, const Eigen::Vector2d& semi_axes);
  static ConvexDomain polygon(std::vector<Point> vertices);

  const Shape& shape() const { return shape_; }
  double margin() const { return margin_; }
  int dimension() const { return std::holds_alternative<Interval>(shape_) ? 1 : 2; }

  /// True iff x lies in the open region.
  bool contains(const Point& x) const;
  /// Negative inside, zero on the boundary, positive outside.
  double signed_distance(const Point& x) const;
  double diameter() const;
  BoundingBox bounding_box() const;
  Point centroid() const;

  /// {x : dist(x, this) < eps}.
  ConvexDomain outer_parallel_body(double eps) const;
  InteriorSphere interior_sphere() const;

  /// Image under x -> center + factor * (x - center).
  ConvexDomain scaled(double factor, const Point& center) const;

  /// Smallest t in (0, tmax] with x + t*dir on the boundary, for x inside and
  /// |dir| = 1. Empty when the whole segment stays inside.
  std::optional<double> ray_exit(const Point& x, const Eigen::Vector2d& dir, double tmax) const;

  /// Points of the boundary, equally spaced in angle about the centroid
  /// (the two endpoints for an interval).
  std::vector<Point> boundary_samples(int count) const;

 private:
  explicit ConvexDomain(Shape shape, double margin = 0.0) : shape_(std::move(shape)), margin_(margin) {}

  double core_signed_distance(const Point& x) const;

  Shape shape_;
  double margin_ = 0.0;
};

}  // namespace ninf
