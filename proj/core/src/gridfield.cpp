#include "meanfix/gridfield.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "meanfix/error.hpp"

namespace meanfix {

BoundaryData BoundaryData::constant(double c) {
  return {fmt::format("constant({})", c), [c](const Point2 &, double) { return c; }};
}

BoundaryData BoundaryData::affine(double a, double b, double c) {
  return {fmt::format("affine({},{},{})", a, b, c), [a, b, c](const Point2 &p, double) { return a + b * p.x + c * p.y; }};
}

BoundaryData BoundaryData::harmonic2() {
  return {"harmonic2", [](const Point2 &p, double) { return p.x * p.x - p.y * p.y; }};
}

BoundaryData BoundaryData::cos_k_theta(double k) {
  return {fmt::format("cosktheta({})", k), [k](const Point2 &, double theta) { return std::cos(k * theta); }};
}

const char *to_string(Extension e) { return e == Extension::natural ? "natural" : "projection"; }

Extension extension_from_string(const std::string &s) {
  if (s == "natural") return Extension::natural;
  if (s == "projection") return Extension::projection;
  throw InvalidArgument(fmt::format("unknown extension '{}' (expected natural|projection)", s));
}

GridField::GridField(Point2 origin, double h, int nx, int ny)
    : origin_(origin), h_(h), inv_h_(1.0 / h), nx_(nx), ny_(ny) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument(fmt::format("lattice spacing must be positive, got {}", h));
  if (nx < 3 || ny < 3) throw InvalidArgument(fmt::format("lattice needs at least 3x3 nodes, got {}x{}", nx, ny));
  values_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  kinds_.assign(values_.size(), NodeKind::interior);
}

GridField GridField::lattice_for(const Domain &domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument(fmt::format("lattice spacing must be positive, got {}", h));
  const BoundingBox box = domain.bounding_box();
  // A spacing that divides the box exactly should not grow an extra column.
  const auto count = [h](double width) { return static_cast<int>(std::ceil(width / h - 1e-9)) + 1; };
  GridField field(box.lo, h, std::max(3, count(box.hi.x - box.lo.x)), std::max(3, count(box.hi.y - box.lo.y)));
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const bool interior = domain.contains(field.node(idx)) == Containment::interior;
    field.set_kind(idx, interior ? NodeKind::interior : NodeKind::pinned);
  }
  return field;
}

bool GridField::same_lattice(const GridField &o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_ && origin_ == o.origin_;
}

bool GridField::in_hull(const Point2 &p) const {
  const double gx = (p.x - origin_.x) * inv_h_;
  const double gy = (p.y - origin_.y) * inv_h_;
  return gx >= 0.0 && gy >= 0.0 && gx <= nx_ - 1 && gy <= ny_ - 1;
}

double GridField::sample(const Point2 &p) const {
  if (!in_hull(p)) throw InvalidArgument(fmt::format("sample point ({}, {}) outside the lattice", p.x, p.y));
  return sample_unchecked(p.x, p.y);
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double GridField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double pinned_value(const Domain &domain, const BoundaryData &f, const Point2 &node, Extension ext) {
  if (ext == Extension::natural) {
    const double v = f(domain, node);
    if (std::isfinite(v)) return v;
  }
  return f(domain, domain.project_to_boundary(node));
}

GridField build_initial(const Domain &domain, const BoundaryData &f, double h, Extension ext) {
  GridField field = GridField::lattice_for(domain, h);

  const Point2 c = domain.center();
  const int ci = static_cast<int>(std::lround((c.x - field.origin().x) / h));
  const int cj = static_cast<int>(std::lround((c.y - field.origin().y) / h));
  int row = 0;
  int col = 0;
  for (int i = 0; i < field.nx(); ++i) row += field.kind(field.index(i, cj)) == NodeKind::interior;
  for (int j = 0; j < field.ny(); ++j) col += field.kind(field.index(ci, j)) == NodeKind::interior;
  if (row < 3 || col < 3) {
    throw InvalidArgument(fmt::format("degenerate lattice: h = {} leaves {}x{} interior nodes across the domain", h, row, col));
  }

  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const Point2 p = field.node(idx);
    const double v = pinned_value(domain, f, p, ext);
    if (!std::isfinite(v)) throw InvalidArgument(fmt::format("boundary data '{}' is not finite near ({}, {})", f.name(), p.x, p.y));
    field[idx] = v;
  }
  return field;
}

double sup_norm_diff(const GridField &a, const GridField &b) {
  if (!a.same_lattice(b)) throw InvalidArgument("sup_norm_diff: lattice mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<bool> subdomain_mask(const GridField &field, const Domain &domain, double dist_min) {
  std::vector<bool> mask(field.size(), false);
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    mask[idx] = field.kind(idx) == NodeKind::interior && domain.dist_to_boundary(field.node(idx)) >= dist_min;
  }
  return mask;
}

double modulus_estimate(const GridField &field, const std::vector<bool> &mask, double t) {
  if (!(t > 0.0)) throw InvalidArgument(fmt::format("modulus_estimate: t must be positive, got {}", t));
  if (mask.size() != field.size() || std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw InvalidArgument("modulus_estimate: empty subdomain");
  }
  const double h = field.spacing();
  const int reach = static_cast<int>(std::floor(t / h + 1e-12));
  const double t2 = t * t * (1.0 + 1e-12);
  double best = 0.0;
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      const std::size_t p = field.index(i, j);
      if (!mask[p]) continue;
      // Half-plane of offsets so each unordered pair is visited once.
      for (int dj = 0; dj <= reach && j + dj < field.ny(); ++dj) {
        for (int di = dj == 0 ? 1 : -reach; di <= reach; ++di) {
          if (i + di < 0 || i + di >= field.nx()) continue;
          if ((di * di + dj * dj) * h * h > t2) continue;
          const std::size_t q = field.index(i + di, j + dj);
          if (!mask[q]) continue;
          best = std::max(best, std::abs(field[p] - field[q]));
        }
      }
    }
  }
  return best;
}

double modulus_estimate(const GridField &field, const Domain &domain, double dist_min, double t) {
  return modulus_estimate(field, subdomain_mask(field, domain, dist_min), t);
}

void write_csv(const GridField &field, std::ostream &os) {
  os << "x,y,value,kind\n";
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const Point2 p = field.node(idx);
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{}\n", p.x, p.y, field[idx],
               field.kind(idx) == NodeKind::interior ? "interior" : "pinned");
  }
}

nlohmann::json lattice_metadata(const GridField &field) {
  return {{"origin", {field.origin().x, field.origin().y}}, {"h", field.spacing()}, {"nx", field.nx()}, {"ny", field.ny()}};
}

} // namespace meanfix
