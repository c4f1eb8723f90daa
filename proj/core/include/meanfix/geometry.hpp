#pragma once

#include <string>
#include <variant>

#include "meanfix/point.hpp"

namespace meanfix {

/// Half-width of the band around the boundary that counts as "on" it.
inline constexpr double kTolGeom = 1e-10;

struct Disk {
  Point2 center;
  double radius = 1.0;
};

/// Axis-aligned ellipse with semi-axes a >= b.
struct Ellipse {
  Point2 center;
  double a = 1.0;
  double b = 1.0;
};

/// { p : |p.x - c.x|^q + |p.y - c.y|^q < radius^q }, 1 < q < inf.
struct PNormBall {
  Point2 center;
  double radius = 1.0;
  double exponent = 2.0;
};

enum class Containment { interior, boundary, exterior };

const char *to_string(Containment c);

struct BoundingBox {
  Point2 lo;
  Point2 hi;
};

struct BoundaryPoint {
  Point2 point;
  double distance = 0.0; // unsigned distance from the query point
};

/// A strictly convex bounded planar domain from a fixed catalog. Polygons and
/// other shapes with flat boundary pieces are deliberately not representable.
class Domain {
 public:
  using Shape = std::variant<Disk, Ellipse, PNormBall>;

  /// Validates the shape parameters; throws InvalidArgument otherwise.
  explicit Domain(Shape shape);

  static Domain disk(Point2 center, double radius) { return Domain(Disk{center, radius}); }
  static Domain ellipse(Point2 center, double a, double b) { return Domain(Ellipse{center, a, b}); }
  static Domain pnorm_ball(Point2 center, double radius, double q) {
    return Domain(PNormBall{center, radius, q});
  }

  const Shape &shape() const { return shape_; }
  std::string kind() const;
  Point2 center() const;
  BoundingBox bounding_box() const;
  double diameter() const;

  /// Boundary curve parametrized over [0, 2pi). For the ellipse this is the
  /// eccentric anomaly, for the disk and the p-norm ball the polar angle.
  Point2 boundary_point(double t) const;

  /// Polar angle of p about the domain center, in (-pi, pi].
  double angle_of(const Point2 &p) const;

  /// Strict implicit test, no tolerance band.
  bool inside(const Point2 &p) const;

  Containment contains(const Point2 &p) const;

  /// Euclidean distance to the boundary; 0 for exterior points.
  double dist_to_boundary(const Point2 &p) const;

  /// A nearest boundary point. At the center of a disk every boundary point
  /// is nearest and the one at angle 0 is returned.
  Point2 project_to_boundary(const Point2 &p) const;

  /// Nearest boundary point together with the unsigned distance to it.
  BoundaryPoint nearest_boundary(const Point2 &p) const;

 private:
  Shape shape_;
};

} // namespace meanfix
