#include "meanfix/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "meanfix/error.hpp"

namespace meanfix {

namespace {

Point3 sub(const Point3 &a, const Point3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double dot3(const Point3 &a, const Point3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Point3 cross3(const Point3 &a, const Point3 &b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double len3(const Point3 &a) { return std::sqrt(dot3(a, a)); }
Point3 scaled(const Point3 &a, double s) { return {a.x * s, a.y * s, a.z * s}; }

double line_distance(const Point3 &p, const Point3 &a, const Point3 &b) {
  const Point3 ab = sub(b, a);
  return len3(cross3(ab, sub(p, a))) / len3(ab);
}

double segment_distance(double px, double py, const std::array<double, 2> &a, const std::array<double, 2> &b) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double ll = ex * ex + ey * ey;
  double s = ll > 0.0 ? ((px - a[0]) * ex + (py - a[1]) * ey) / ll : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(px - (a[0] + s * ex), py - (a[1] + s * ey));
}

} // namespace

ConvexHull3::ConvexHull3(std::span<const Point3> pts, double rel_eps) {
  if (pts.size() < 3) throw InvalidArgument(fmt::format("convex hull needs at least 3 points, got {}", pts.size()));
  Point3 lo = pts[0];
  Point3 hi = pts[0];
  for (const auto &p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) throw InvalidArgument("convex hull: non-finite point");
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  eps_ = rel_eps * std::max(len3(sub(hi, lo)), std::numeric_limits<double>::min());

  std::size_t i0 = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].x < pts[i0].x) i0 = i;
  }
  std::size_t i1 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = len3(sub(pts[i], pts[i0]));
    if (d > best) best = d, i1 = i;
  }
  if (best <= eps_) throw InvalidArgument("convex hull: all points coincide");
  std::size_t i2 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = line_distance(pts[i], pts[i0], pts[i1]);
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps_) throw InvalidArgument("convex hull: points are collinear");
  const Point3 n = cross3(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
  const double nl = len3(n);
  std::size_t i3 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(dot3(n, sub(pts[i], pts[i0]))) / nl;
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps_) {
    dimension_ = 2;
    build_planar(pts, i0, i1, i2);
  } else {
    dimension_ = 3;
    build_solid(pts, {i0, i1, i2, i3});
  }
}

void ConvexHull3::build_solid(std::span<const Point3> pts, std::array<std::size_t, 4> seed) {
  struct Face {
    std::array<std::size_t, 3> v;
    Plane plane;
    bool alive;
  };
  std::vector<Face> faces;

  const auto make_face = [&pts](std::size_t a, std::size_t b, std::size_t c) {
    const Point3 n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    const double l = len3(n);
    const Point3 u = scaled(n, 1.0 / l);
    return Face{{a, b, c}, {u.x, u.y, u.z, dot3(u, pts[a])}, true};
  };
  const auto dist = [&pts](const Plane &pl, std::size_t i) {
    return pl.nx * pts[i].x + pl.ny * pts[i].y + pl.nz * pts[i].z - pl.d;
  };

  const auto [a, b, c, d] = seed;
  // Orient the base triangle so that the fourth point is behind it.
  Face base = make_face(a, b, c);
  if (dist(base.plane, d) > 0.0) {
    faces.push_back(make_face(a, c, b));
    faces.push_back(make_face(a, b, d));
    faces.push_back(make_face(b, c, d));
    faces.push_back(make_face(c, a, d));
  } else {
    faces.push_back(base);
    faces.push_back(make_face(a, d, b));
    faces.push_back(make_face(b, d, c));
    faces.push_back(make_face(c, d, a));
  }

  std::vector<std::size_t> visible;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == a || p == b || p == c || p == d) continue;
    visible.clear();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].alive && dist(faces[f].plane, p) > eps_) visible.push_back(f);
    }
    if (visible.empty()) continue;
    edges.clear();
    for (std::size_t f : visible) {
      const auto &v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges.emplace(v[e], v[(e + 1) % 3]);
    }
    for (std::size_t f : visible) faces[f].alive = false;
    for (const auto &[u, w] : edges) {
      if (!edges.contains({w, u})) faces.push_back(make_face(u, w, p));
    }
  }

  for (const auto &f : faces) {
    if (!f.alive) continue;
    facets_.push_back(f.v);
    planes_.push_back(f.plane);
  }
}

void ConvexHull3::build_planar(std::span<const Point3> pts, std::size_t a, std::size_t b, std::size_t c) {
  origin_ = pts[a];
  const Point3 ab = sub(pts[b], pts[a]);
  e1_ = scaled(ab, 1.0 / len3(ab));
  const Point3 n = cross3(ab, sub(pts[c], pts[a]));
  normal_ = scaled(n, 1.0 / len3(n));
  e2_ = cross3(normal_, e1_);

  std::vector<std::array<double, 2>> q(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point3 r = sub(pts[i], origin_);
    q[i] = {dot3(r, e1_), dot3(r, e2_)};
  }
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&q](std::size_t i, std::size_t j) { return q[i] < q[j]; });

  // Andrew's monotone chain; near-collinear points are dropped.
  const auto turn = [&q](std::size_t o, std::size_t i, std::size_t j) {
    return (q[i][0] - q[o][0]) * (q[j][1] - q[o][1]) - (q[i][1] - q[o][1]) * (q[j][0] - q[o][0]);
  };
  const double area_eps = eps_ * eps_;
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], i) <= area_eps) --k;
    hull[k++] = i;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t i = order[t];
    while (k >= lower && turn(hull[k - 2], hull[k - 1], i) <= area_eps) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  polygon_ = hull;
  for (std::size_t i : polygon_) poly2_.push_back(q[i]);
}

double ConvexHull3::signed_distance(const Point3 &q) const {
  if (dimension_ == 3) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &pl : planes_) worst = std::max(worst, pl.nx * q.x + pl.ny * q.y + pl.nz * q.z - pl.d);
    return -worst;
  }
  const Point3 r = sub(q, origin_);
  const double h = dot3(r, normal_);
  const double s = dot3(r, e1_);
  const double t = dot3(r, e2_);
  bool inside = true;
  double outside = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly2_.size(); ++i) {
    const auto &p0 = poly2_[i];
    const auto &p1 = poly2_[(i + 1) % poly2_.size()];
    const double cr = (p1[0] - p0[0]) * (t - p0[1]) - (p1[1] - p0[1]) * (s - p0[0]);
    if (cr < 0.0) inside = false;
    outside = std::min(outside, segment_distance(s, t, p0, p1));
  }
  return inside ? -std::abs(h) : -std::hypot(outside, h);
}

} // namespace meanfix
