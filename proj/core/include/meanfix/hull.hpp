#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace meanfix {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Convex hull of a finite point set in 3-space, built incrementally.
///
/// Point sets whose affine hull is a plane are handled separately: the hull
/// is then a convex polygon in that plane. Fewer than three affinely
/// independent points throw InvalidArgument.
class ConvexHull3 {
 public:
  /// `rel_eps` scales with the bounding-box diagonal and decides when a
  /// point counts as lying on a facet plane.
  explicit ConvexHull3(std::span<const Point3> points, double rel_eps = 1e-12);

  /// 3 for a solid hull, 2 for a planar polygon.
  int dimension() const { return dimension_; }

  /// Signed distance from q to the hull boundary, positive inside. For a
  /// solid hull this is -max over facets of the facet-plane distance; for
  /// a planar hull a point is never strictly inside, so the result is
  /// -|offset from the plane| when its projection lies in the polygon.
  double signed_distance(const Point3 &q) const;

  bool contains(const Point3 &q, double tol) const { return signed_distance(q) >= -tol; }

  /// Facets of a solid hull as outward-oriented vertex triples.
  const std::vector<std::array<std::size_t, 3>> &facets() const { return facets_; }
  /// Vertex indices of a planar hull, counter-clockwise in the plane basis.
  const std::vector<std::size_t> &polygon() const { return polygon_; }

  double eps() const { return eps_; }

 private:
  struct Plane {
    double nx, ny, nz, d;
  };

  void build_solid(std::span<const Point3> pts, std::array<std::size_t, 4> seed);
  void build_planar(std::span<const Point3> pts, std::size_t a, std::size_t b, std::size_t c);

  int dimension_ = 3;
  double eps_ = 0.0;
  std::vector<std::array<std::size_t, 3>> facets_;
  std::vector<Plane> planes_;

  // Planar case: origin, in-plane basis, unit normal, polygon in plane coordinates.
  Point3 origin_{};
  Point3 e1_{};
  Point3 e2_{};
  Point3 normal_{};
  std::vector<std::size_t> polygon_;
  std::vector<std::array<double, 2>> poly2_;
};

} // namespace meanfix
