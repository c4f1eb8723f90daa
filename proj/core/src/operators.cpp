#include "meanfix/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "meanfix/error.hpp"
#include "meanfix/parallel.hpp"

namespace meanfix {

BallRule::BallRule(int n_r, int n_th) : n_r_(n_r), n_th_(n_th) {
  if (n_r < 2) throw InvalidArgument(fmt::format("ball rule: n_r must be >= 2, got {}", n_r));
  if (n_th < 4 || n_th % 2 != 0) throw InvalidArgument(fmt::format("ball rule: n_th must be even and >= 4, got {}", n_th));
  nodes_.reserve(static_cast<std::size_t>(n_r) * n_th);
  for (int i = 0; i < n_r; ++i) {
    const double r = std::sqrt((i + 0.5) / n_r);
    const double offset = (i % 2 == 1) ? std::numbers::pi / n_th : 0.0;
    for (int j = 0; j < n_th / 2; ++j) {
      const double t = 2.0 * std::numbers::pi * j / n_th + offset;
      const Point2 p{r * std::cos(t), r * std::sin(t)};
      nodes_.push_back(p);
      nodes_.push_back(-p);
    }
  }
  weights_.assign(nodes_.size(), 1.0 / static_cast<double>(nodes_.size()));
}

OperatorSpec::OperatorSpec(const Domain &domain_, const RadiusParams &params_, BallRule rule_)
    : domain(domain_), params(params_), rule(std::move(rule_)) {
  const auto violations = validate_params(params, domain);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "inadmissible parameters:";
    for (const auto &v : violations) msg << ' ' << v.message << ';';
    throw InvalidArgument(msg.str());
  }
}

const char *to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::S:
      return "S";
    case OperatorKind::M:
      return "M";
    case OperatorKind::T:
      return "T";
    case OperatorKind::H:
      return "H";
  }
  return "?";
}

namespace {

struct BallStats {
  double mean;
  double lo;
  double hi;
};

// Samples u at x + r * node for every rule node. The bilinear weights are
// applied as a non-negative combination of the four nodal values, so under
// IEEE rounding the samples stay monotone in the nodal values.
inline BallStats ball_stats(const GridField &u, const BallRule &rule, const Point2 &x, double r, double center) {
  const double *values = u.values().data();
  const int nx = u.nx();
  const double inv_h = 1.0 / u.spacing();
  const double gx0 = (x.x - u.origin().x) * inv_h;
  const double gy0 = (x.y - u.origin().y) * inv_h;
  const double scale = r * inv_h;
  const int imax = u.nx() - 2;
  const int jmax = u.ny() - 2;
  const Point2 *nodes = rule.nodes().data();
  const std::size_t count = rule.size();

  double sum0 = 0.0;
  double sum1 = 0.0;
  double lo = center;
  double hi = center;
  for (std::size_t k = 0; k < count; ++k) {
    const double gx = gx0 + scale * nodes[k].x;
    const double gy = gy0 + scale * nodes[k].y;
    int i = static_cast<int>(gx);
    int j = static_cast<int>(gy);
    i = i < imax ? i : imax;
    j = j < jmax ? j : jmax;
    const double fx = gx - i;
    const double fy = gy - j;
    const double *v = values + static_cast<std::size_t>(j) * nx + i;
    const double s = (1.0 - fy) * ((1.0 - fx) * v[0] + fx * v[1]) + fy * ((1.0 - fx) * v[nx] + fx * v[nx + 1]);
    if (k & 1U) {
      sum1 += s;
    } else {
      sum0 += s;
    }
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  // The center enters the midrange only; the mean is over the rule nodes.
  return {(sum0 + sum1) * rule.weight(), lo, hi};
}

// Field range used to clamp operator outputs. Mathematically the clamp is a
// no-op; numerically it makes range containment exact while keeping the
// operator monotone and nonexpansive.
struct Range {
  double lo;
  double hi;
};

inline Range field_range(const GridField &u) { return {u.min(), u.max()}; }

inline double combine(OperatorKind which, double alpha, double center, const BallStats &b, const Range &range) {
  const double mean = b.mean;
  const double mid = 0.5 * (b.lo + b.hi);
  double t = 0.0;
  switch (which) {
    case OperatorKind::S:
      t = mid;
      break;
    case OperatorKind::M:
      t = mean;
      break;
    case OperatorKind::T:
    case OperatorKind::H:
      t = alpha == 0.0 ? mean : alpha * mid + (1.0 - alpha) * mean;
      break;
  }
  t = std::clamp(t, range.lo, range.hi);
  return which == OperatorKind::H ? std::clamp(0.5 * (center + t), range.lo, range.hi) : t;
}

} // namespace

double apply_at(const GridField &field, const OperatorSpec &spec, OperatorKind which, const Point2 &x) {
  const double r = radius_at(spec.params, spec.domain, x);
  const double center = field.sample(x);
  // Every node of B(x, r) lies in the domain, hence in the lattice hull.
  return combine(which, spec.params.alpha, center, ball_stats(field, spec.rule, x, r, center), field_range(field));
}

double S_at(const GridField &field, const OperatorSpec &spec, const Point2 &x) {
  return apply_at(field, spec, OperatorKind::S, x);
}
double M_at(const GridField &field, const OperatorSpec &spec, const Point2 &x) {
  return apply_at(field, spec, OperatorKind::M, x);
}
double T_alpha_at(const GridField &field, const OperatorSpec &spec, const Point2 &x) {
  return apply_at(field, spec, OperatorKind::T, x);
}
double H_alpha_at(const GridField &field, const OperatorSpec &spec, const Point2 &x) {
  return apply_at(field, spec, OperatorKind::H, x);
}

SweepPlan::SweepPlan(const OperatorSpec &spec, const GridField &lattice)
    : spec_(&spec), origin_(lattice.origin()), h_(lattice.spacing()), nx_(lattice.nx()), ny_(lattice.ny()) {
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    if (lattice.kind(idx) != NodeKind::interior) continue;
    const double d = spec.domain.dist_to_boundary(lattice.node(idx));
    interior_.push_back(static_cast<std::uint32_t>(idx));
    radii_.push_back(radius_from_distance(spec.params, d));
  }
}

void SweepPlan::check_lattice(const GridField &u) const {
  if (u.nx() != nx_ || u.ny() != ny_ || u.spacing() != h_ || !(u.origin() == origin_)) {
    throw InvalidArgument("sweep: field is not on the plan's lattice");
  }
}

void SweepPlan::apply(const GridField &u, OperatorKind which, GridField &out, int workers) const {
  check_lattice(u);
  check_lattice(out);
  if (&u == &out) throw InvalidArgument("sweep: output may not alias the input");
  std::copy(u.values().begin(), u.values().end(), out.values().begin());
  const double alpha = spec_->params.alpha;
  const Range range = field_range(u);
  parallel_chunks(interior_.size(), workers, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t idx = interior_[k];
      const double c = u[idx];
      out[idx] = combine(which, alpha, c, ball_stats(u, spec_->rule, u.node(idx), radii_[k], c), range);
    }
  });
}

double SweepPlan::residual(const GridField &u, int workers) const {
  check_lattice(u);
  const double alpha = spec_->params.alpha;
  const Range range = field_range(u);
  std::vector<double> partial(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
  parallel_chunks(interior_.size(), workers, [&](std::size_t b, std::size_t e, std::size_t chunk) {
    double m = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t idx = interior_[k];
      const double c = u[idx];
      const double t = combine(OperatorKind::T, alpha, c, ball_stats(u, spec_->rule, u.node(idx), radii_[k], c), range);
      m = std::max(m, std::abs(t - c));
    }
    partial[chunk] = m;
  });
  return *std::max_element(partial.begin(), partial.end());
}

double SweepPlan::step_H(const GridField &u, GridField &next, int workers) const {
  check_lattice(u);
  check_lattice(next);
  if (&u == &next) throw InvalidArgument("sweep: output may not alias the input");
  std::copy(u.values().begin(), u.values().end(), next.values().begin());
  const double alpha = spec_->params.alpha;
  const Range range = field_range(u);
  std::vector<double> partial(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
  parallel_chunks(interior_.size(), workers, [&](std::size_t b, std::size_t e, std::size_t chunk) {
    double m = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t idx = interior_[k];
      const double c = u[idx];
      const double t = combine(OperatorKind::T, alpha, c, ball_stats(u, spec_->rule, u.node(idx), radii_[k], c), range);
      m = std::max(m, std::abs(t - c));
      next[idx] = 0.5 * (c + t);
    }
    partial[chunk] = m;
  });
  return *std::max_element(partial.begin(), partial.end());
}

GridField sweep(const GridField &field, const OperatorSpec &spec, OperatorKind which, int workers) {
  const SweepPlan plan(spec, field);
  GridField out = field;
  plan.apply(field, which, out, workers);
  return out;
}

} // namespace meanfix
