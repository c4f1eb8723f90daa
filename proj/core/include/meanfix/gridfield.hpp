#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanfix/geometry.hpp"

namespace meanfix {

/// Continuous boundary data f. The evaluator receives a point and its polar
/// angle about the domain center, so expressions may use x, y or theta.
class BoundaryData {
 public:
  using Fn = std::function<double(const Point2 &, double theta)>;

  BoundaryData(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  double operator()(const Point2 &p, double theta) const { return fn_(p, theta); }
  double operator()(const Domain &domain, const Point2 &p) const { return fn_(p, domain.angle_of(p)); }

  const std::string &name() const { return name_; }

  static BoundaryData constant(double c);
  /// a + b x + c y
  static BoundaryData affine(double a, double b, double c);
  /// x^2 - y^2
  static BoundaryData harmonic2();
  /// cos(k theta)
  static BoundaryData cos_k_theta(double k);

 private:
  std::string name_;
  Fn fn_;
};

/// How f is extended from the boundary to the lattice, both for the initial
/// field and for the pinned nodes outside the domain.
enum class Extension {
  natural,    // f evaluated at the node itself; f(proj(node)) where that is not finite
  projection, // f(proj(node)), constant along boundary normals
};

const char *to_string(Extension e);
Extension extension_from_string(const std::string &s);

enum class NodeKind : std::uint8_t { interior, pinned };

/// Scalar field on a uniform lattice covering a domain's bounding box.
/// Values between nodes are bilinear, so every evaluation is a convex
/// combination of at most four nodal values.
class GridField {
 public:
  GridField(Point2 origin, double h, int nx, int ny);

  /// Lattice with spacing h covering the bounding box; nodes exterior to the
  /// domain or within kTolGeom of its boundary are pinned. Values start at 0.
  static GridField lattice_for(const Domain &domain, double h);

  const Point2 &origin() const { return origin_; }
  double spacing() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  Point2 node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  Point2 node(std::size_t idx) const { return node(static_cast<int>(idx % nx_), static_cast<int>(idx / nx_)); }

  double &operator[](std::size_t idx) { return values_[idx]; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  NodeKind kind(std::size_t idx) const { return kinds_[idx]; }
  void set_kind(std::size_t idx, NodeKind k) { kinds_[idx] = k; }
  std::span<const NodeKind> kinds() const { return kinds_; }

  bool same_lattice(const GridField &o) const;
  bool in_hull(const Point2 &p) const;

  /// Bilinear interpolation. Throws InvalidArgument outside the lattice hull.
  double sample(const Point2 &p) const;

  /// Bilinear interpolation without the hull check, for hot loops whose
  /// query points are known to lie inside the domain.
  double sample_unchecked(double px, double py) const {
    const double gx = (px - origin_.x) * inv_h_;
    const double gy = (py - origin_.y) * inv_h_;
    int i = static_cast<int>(gx);
    int j = static_cast<int>(gy);
    i = i < nx_ - 1 ? i : nx_ - 2;
    j = j < ny_ - 1 ? j : ny_ - 2;
    const double fx = gx - i;
    const double fy = gy - j;
    const double *v = values_.data() + static_cast<std::size_t>(j) * nx_ + i;
    return (1.0 - fy) * ((1.0 - fx) * v[0] + fx * v[1]) + fy * ((1.0 - fx) * v[nx_] + fx * v[nx_ + 1]);
  }

  double min() const;
  double max() const;
  double sup_norm() const;

 private:
  Point2 origin_;
  double h_;
  double inv_h_;
  int nx_;
  int ny_;
  std::vector<double> values_;
  std::vector<NodeKind> kinds_;
};

/// Initial field u0: every node holds the extension of f chosen by `ext`.
/// Pinned nodes keep that value for the rest of the iteration.
/// Throws InvalidArgument when fewer than 3 interior nodes lie along the
/// lattice row or column through the domain center.
GridField build_initial(const Domain &domain, const BoundaryData &f, double h, Extension ext = Extension::natural);

/// Value of the extension of f at a lattice node.
double pinned_value(const Domain &domain, const BoundaryData &f, const Point2 &node, Extension ext);

/// max over nodes |a - b|. Throws InvalidArgument on lattice mismatch.
double sup_norm_diff(const GridField &a, const GridField &b);

/// Node mask of {x : dist(x, boundary) >= dist_min}.
std::vector<bool> subdomain_mask(const GridField &field, const Domain &domain, double dist_min);

/// max |u(p) - u(q)| over lattice node pairs p, q in the mask with
/// |p - q| <= t. A lower bound for the modulus of continuity restricted to
/// the subdomain. Throws InvalidArgument for t <= 0 or an empty mask.
double modulus_estimate(const GridField &field, const std::vector<bool> &mask, double t);
double modulus_estimate(const GridField &field, const Domain &domain, double dist_min, double t);

/// CSV dump with header `x,y,value,kind`, row-major (y outer, x inner).
void write_csv(const GridField &field, std::ostream &os);
nlohmann::json lattice_metadata(const GridField &field);

} // namespace meanfix
