#include "ninf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ninf {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

void require_finite(const Point& p, const char* what) {
  if (!p.allFinite()) throw std::invalid_argument(std::string(what) + " must be finite");
}

// Bisection for the root of the ellipse distance equation (Eberly's
// formulation); r0 = (e0/e1)^2, z = y / e.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 200; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0.0) {
      s0 = s;
    } else if (g < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

// Distance from (y0, y1), both >= 0, to the ellipse with semi-axes e0 >= e1.
double ellipse_distance_first_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0);
      const double x1 = y1 / (sbar + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0));
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double ellipse_signed_distance(const Ellipse& e, const Point& x) {
  const Eigen::Vector2d d = (x - e.center).cwiseAbs();
  double a = e.semi_axes.x();
  double b = e.semi_axes.y();
  double y0 = d.x();
  double y1 = d.y();
  if (a < b) {
    std::swap(a, b);
    std::swap(y0, y1);
  }
  const double dist = ellipse_distance_first_quadrant(a, b, y0, y1);
  const double level = (y0 / a) * (y0 / a) + (y1 / b) * (y1 / b);
  return level < 1.0 ? -dist : dist;
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

Eigen::Vector2d outward_normal(const Point& a, const Point& b) {
  const Eigen::Vector2d e = (b - a).normalized();
  return {e.y(), -e.x()};
}

double polygon_signed_distance(const Polygon& poly, const Point& x) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  double max_plane = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    max_plane = std::max(max_plane, outward_normal(v[i], v[(i + 1) % n]).dot(x - v[i]));
  }
  if (max_plane < 0.0) return max_plane;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, segment_distance(x, v[i], v[(i + 1) % n]));
  return best;
}

std::optional<double> clip(double t, double tmax) {
  if (t <= tmax) return std::max(t, 0.0);
  return std::nullopt;
}

}  // namespace

ConvexDomain ConvexDomain::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("interval endpoints must be finite with lo < hi");
  }
  return ConvexDomain(Interval{lo, hi});
}

ConvexDomain ConvexDomain::ball(const Point& center, double radius) {
  require_finite(center, "ball center");
  if (!std::isfinite(radius) || !(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  return ConvexDomain(Ball{center, radius});
}

ConvexDomain ConvexDomain::ellipse(const Point& center, const Eigen::Vector2d& semi_axes) {
  require_finite(center, "ellipse center");
  if (!semi_axes.allFinite() || !(semi_axes.minCoeff() > 0.0)) {
    throw std::invalid_argument("ellipse semi-axes must be positive");
  }
  return ConvexDomain(Ellipse{center, semi_axes});
}

ConvexDomain ConvexDomain::polygon(std::vector<Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  double scale = 0.0;
  for (const auto& p : vertices) {
    require_finite(p, "polygon vertex");
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
  if (area2 < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
    area2 = -area2;
  }
  if (!(area2 > 0.0)) throw std::invalid_argument("polygon has zero area");
  const double tol = 1e-14 * std::max(1.0, scale * scale);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d e0 = vertices[(i + 1) % n] - vertices[i];
    const Eigen::Vector2d e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (!(cross(e0, e1) > tol)) {
      throw std::invalid_argument("polygon is not strictly convex at vertex " + std::to_string((i + 1) % n));
    }
  }
  return ConvexDomain(Polygon{std::move(vertices)});
}

double ConvexDomain::core_signed_distance(const Point& x) const {
  return std::visit(Overloaded{
                        [&](const Interval& s) { return std::max(s.lo - x.x(), x.x() - s.hi); },
                        [&](const Ball& s) { return (x - s.center).norm() - s.radius; },
                        [&](const Ellipse& s) { return ellipse_signed_distance(s, x); },
                        [&](const Polygon& s) { return polygon_signed_distance(s, x); },
                    },
                    shape_);
}

double ConvexDomain::signed_distance(const Point& x) const { return core_signed_distance(x) - margin_; }

bool ConvexDomain::contains(const Point& x) const { return signed_distance(x) < 0.0; }

double ConvexDomain::diameter() const {
  const double core = std::visit(Overloaded{
                                     [](const Interval& s) { return s.hi - s.lo; },
                                     [](const Ball& s) { return 2.0 * s.radius; },
                                     [](const Ellipse& s) { return 2.0 * s.semi_axes.maxCoeff(); },
                                     [](const Polygon& s) {
                                       double d = 0.0;
                                       for (const auto& a : s.vertices)
                                         for (const auto& b : s.vertices) d = std::max(d, (a - b).norm());
                                       return d;
                                     },
                                 },
                                 shape_);
  return core + 2.0 * margin_;
}

BoundingBox ConvexDomain::bounding_box() const {
  BoundingBox box = std::visit(Overloaded{
                                   [](const Interval& s) { return BoundingBox{Point(s.lo, 0.0), Point(s.hi, 0.0)}; },
                                   [](const Ball& s) {
                                     const Point r(s.radius, s.radius);
                                     return BoundingBox{s.center - r, s.center + r};
                                   },
                                   [](const Ellipse& s) {
                                     return BoundingBox{s.center - s.semi_axes, s.center + s.semi_axes};
                                   },
                                   [](const Polygon& s) {
                                     BoundingBox b{s.vertices.front(), s.vertices.front()};
                                     for (const auto& v : s.vertices) {
                                       b.min = b.min.cwiseMin(v);
                                       b.max = b.max.cwiseMax(v);
                                     }
                                     return b;
                                   },
                               },
                               shape_);
  if (margin_ > 0.0) {
    box.min -= Point::Constant(margin_);
    box.max += Point::Constant(margin_);
  }
  return box;
}

Point ConvexDomain::centroid() const {
  return std::visit(Overloaded{
                        [](const Interval& s) { return Point(0.5 * (s.lo + s.hi), 0.0); },
                        [](const Ball& s) { return s.center; },
                        [](const Ellipse& s) { return s.center; },
                        [](const Polygon& s) {
                          const auto& v = s.vertices;
                          double area2 = 0.0;
                          Point c = Point::Zero();
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            const Point& a = v[i];
                            const Point& b = v[(i + 1) % v.size()];
                            const double w = cross(a, b);
                            area2 += w;
                            c += w * (a + b);
                          }
                          return Point(c / (3.0 * area2));
                        },
                    },
                    shape_);
}

ConvexDomain ConvexDomain::outer_parallel_body(double eps) const {
  if (!std::isfinite(eps) || !(eps > 0.0)) throw std::invalid_argument("parallel body width must be positive");
  if (const auto* s = std::get_if<Interval>(&shape_)) return interval(s->lo - margin_ - eps, s->hi + margin_ + eps);
  if (const auto* s = std::get_if<Ball>(&shape_)) return ball(s->center, s->radius + margin_ + eps);
  return ConvexDomain(shape_, margin_ + eps);
}

InteriorSphere ConvexDomain::interior_sphere() const {
  return std::visit(Overloaded{
                        [&](const Interval& s) { return InteriorSphere{true, 0.5 * (s.hi - s.lo) + margin_}; },
                        [&](const Ball& s) { return InteriorSphere{true, s.radius + margin_}; },
                        [&](const Ellipse& s) {
                          const double a = s.semi_axes.maxCoeff();
                          const double b = s.semi_axes.minCoeff();
                          return InteriorSphere{true, b * b / a + margin_};
                        },
                        [&](const Polygon& s) {
                          if (margin_ > 0.0) return InteriorSphere{true, margin_};
                          const auto& v = s.vertices;
                          const std::size_t n = v.size();
                          for (std::size_t i = 0; i < n; ++i) {
                            const Eigen::Vector2d in = v[(i + n - 1) % n] - v[i];
                            const Eigen::Vector2d out = v[(i + 1) % n] - v[i];
                            const double angle = std::atan2(std::abs(cross(in, out)), in.dot(out));
                            if (angle < std::numbers::pi - 1e-9) return InteriorSphere{false, 0.0};
                          }
                          return InteriorSphere{true, 0.0};
                        },
                    },
                    shape_);
}

ConvexDomain ConvexDomain::scaled(double factor, const Point& center) const {
  if (!std::isfinite(factor) || !(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  auto map = [&](const Point& p) -> Point { return center + factor * (p - center); };
  Shape shape = std::visit(Overloaded{
                               [&](const Interval& s) -> Shape {
                                 return Interval{map(Point(s.lo, 0.0)).x(), map(Point(s.hi, 0.0)).x()};
                               },
                               [&](const Ball& s) -> Shape { return Ball{map(s.center), factor * s.radius}; },
                               [&](const Ellipse& s) -> Shape { return Ellipse{map(s.center), factor * s.semi_axes}; },
                               [&](const Polygon& s) -> Shape {
                                 Polygon out;
                                 for (const auto& v : s.vertices) out.vertices.push_back(map(v));
                                 return out;
                               },
                           },
                           shape_);
  return ConvexDomain(std::move(shape), factor * margin_);
}

std::optional<double> ConvexDomain::ray_exit(const Point& x, const Eigen::Vector2d& dir, double tmax) const {
  if (signed_distance(x) >= 0.0) return 0.0;
  if (margin_ > 0.0) {
    if (signed_distance(x + tmax * dir) < 0.0) return std::nullopt;
    double lo = 0.0;
    double hi = tmax;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * tmax; ++i) {
      const double mid = 0.5 * (lo + hi);
      (signed_distance(x + mid * dir) < 0.0 ? lo : hi) = mid;
    }
    return hi;
  }
  return std::visit(Overloaded{
                        [&](const Interval& s) -> std::optional<double> {
                          if (dir.x() > 0.0) return clip((s.hi - x.x()) / dir.x(), tmax);
                          if (dir.x() < 0.0) return clip((s.lo - x.x()) / dir.x(), tmax);
                          return std::nullopt;
                        },
                        [&](const Ball& s) -> std::optional<double> {
                          const Eigen::Vector2d d = x - s.center;
                          const double b = dir.dot(d);
                          const double c = d.squaredNorm() - s.radius * s.radius;
                          return clip(-b + std::sqrt(b * b - c), tmax);
                        },
                        [&](const Ellipse& s) -> std::optional<double> {
                          const Eigen::Vector2d inv = s.semi_axes.cwiseInverse();
                          const Eigen::Vector2d d = (x - s.center).cwiseProduct(inv);
                          const Eigen::Vector2d v = dir.cwiseProduct(inv);
                          const double a = v.squaredNorm();
                          const double b = d.dot(v);
                          const double c = d.squaredNorm() - 1.0;
                          return clip((-b + std::sqrt(b * b - a * c)) / a, tmax);
                        },
                        [&](const Polygon& s) -> std::optional<double> {
                          const auto& v = s.vertices;
                          double t = std::numeric_limits<double>::infinity();
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            const Eigen::Vector2d n = outward_normal(v[i], v[(i + 1) % v.size()]);
                            const double rate = n.dot(dir);
                            if (rate > 0.0) t = std::min(t, -n.dot(x - v[i]) / rate);
                          }
                          return clip(t, tmax);
                        },
                    },
                    shape_);
}

std::vector<Point> ConvexDomain::boundary_samples(int count) const {
  if (const auto* s = std::get_if<Interval>(&shape_)) return {Point(s->lo, 0.0), Point(s->hi, 0.0)};
  if (count < 3) throw std::invalid_argument("need at least 3 boundary samples in 2D");
  const Point c = centroid();
  const double reach = 2.0 * diameter();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count;
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    out.push_back(c + *ray_exit(c, dir, reach) * dir);
  }
  return out;
}

}  // namespace ninf
