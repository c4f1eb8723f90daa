#include "meanfix/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "meanfix/error.hpp"
#include "meanfix/lp.hpp"

namespace meanfix {

const char *to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::vacuous:
      return "vacuous";
  }
  return "?";
}

namespace {

constexpr std::array<OperatorKind, 4> kOperators{OperatorKind::S, OperatorKind::M, OperatorKind::T, OperatorKind::H};

bool ordered(const GridField &a, const GridField &b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

ComparisonVerdict check_comparison(const Problem &problem, const BoundaryData &f1, const BoundaryData &f2, int workers,
                                   std::size_t boundary_samples) {
  ComparisonVerdict v;
  const Domain &domain = problem.domain();
  for (std::size_t i = 0; i < boundary_samples; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(boundary_samples);
    const Point2 p = domain.boundary_point(t);
    const double a = f1(domain, p);
    const double b = f2(domain, p);
    if (!(a <= b)) {
      v.status = Status::vacuous;
      v.reason = fmt::format("f1 > f2 at boundary point ({}, {}): {} > {}", p.x, p.y, a, b);
      return v;
    }
  }

  Extension ext = problem.extension;
  GridField init1 = build_initial(domain, f1, problem.h, ext);
  GridField init2 = build_initial(domain, f2, problem.h, ext);
  if (!ordered(init1, init2) && ext == Extension::natural) {
    ext = Extension::projection;
    init1 = build_initial(domain, f1, problem.h, ext);
    init2 = build_initial(domain, f2, problem.h, ext);
  }
  v.extension = ext;
  if (!ordered(init1, init2)) {
    v.status = Status::vacuous;
    v.reason = "extensions of f1 and f2 are not ordered on the lattice";
    return v;
  }

  const Problem p1(problem.spec, f1, problem.h, problem.tol, problem.max_iter, ext);
  const Problem p2(problem.spec, f2, problem.h, problem.tol, problem.max_iter, ext);
  const auto start = std::chrono::steady_clock::now();
  FixedPointIteration it1(p1, std::move(init1), workers);
  FixedPointIteration it2(p2, std::move(init2), workers);
  const auto compare = [&] {
    ++v.lockstep_iterates;
    if (!ordered(it1.current(), it2.current())) ++v.iterate_violations;
  };
  compare();
  while (!it1.done() || !it2.done()) {
    const bool both = !it1.done() && !it2.done();
    it1.step();
    it2.step();
    if (both) compare();
  }
  const double ms = elapsed_ms(start);
  v.report1 = std::move(it1).report();
  v.report2 = std::move(it2).report();
  v.report1->wall_ms = v.report2->wall_ms = ms;

  const GridField &u1 = v.report1->field;
  const GridField &u2 = v.report2->field;
  v.worst_final_violation = -std::numeric_limits<double>::infinity();
  v.min_gap = std::numeric_limits<double>::infinity();
  v.max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const double gap = u2[i] - u1[i];
    v.worst_final_violation = std::max(v.worst_final_violation, -gap);
    v.min_gap = std::min(v.min_gap, gap);
    v.max_gap = std::max(v.max_gap, gap);
  }
  const bool final_ok = v.worst_final_violation <= 2.0 * problem.tol;
  v.status = final_ok && v.iterate_violations == 0 ? Status::pass : Status::fail;
  if (!final_ok) v.reason = fmt::format("final fields violate u1 <= u2 + 2 tol by {}", v.worst_final_violation);
  if (v.iterate_violations > 0) {
    if (!v.reason.empty()) v.reason += "; ";
    v.reason += fmt::format("{} iterates out of order", v.iterate_violations);
  }
  return v;
}

std::vector<Point3> graph_sample(const GridField &field, const Domain &domain, std::size_t sample_count, std::uint64_t seed) {
  std::vector<std::size_t> ring;
  std::vector<std::size_t> interior;
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      const std::size_t idx = field.index(i, j);
      if (field.kind(idx) == NodeKind::interior) {
        interior.push_back(idx);
        continue;
      }
      bool touches = false;
      for (int dj = -1; dj <= 1 && !touches; ++dj) {
        for (int di = -1; di <= 1 && !touches; ++di) {
          const int a = i + di;
          const int b = j + dj;
          if (a < 0 || b < 0 || a >= field.nx() || b >= field.ny()) continue;
          touches = field.kind(field.index(a, b)) == NodeKind::interior;
        }
      }
      if (touches) ring.push_back(idx);
    }
  }
  std::stable_sort(ring.begin(), ring.end(), [&](std::size_t a, std::size_t b) {
    return domain.angle_of(field.node(a)) < domain.angle_of(field.node(b));
  });

  std::vector<std::size_t> chosen;
  const std::size_t ring_max = std::max<std::size_t>(3, 2 * sample_count / 3);
  if (ring.size() <= ring_max) {
    chosen = ring;
  } else {
    for (std::size_t k = 0; k < ring_max; ++k) chosen.push_back(ring[k * ring.size() / ring_max]);
  }
  const std::size_t rest = sample_count > chosen.size() ? sample_count - chosen.size() : 0;
  std::mt19937_64 rng(seed);
  std::sample(interior.begin(), interior.end(), std::back_inserter(chosen), rest, rng);

  std::vector<Point3> pts;
  pts.reserve(chosen.size());
  for (std::size_t idx : chosen) {
    const Point2 p = field.node(idx);
    pts.push_back({p.x, p.y, field[idx]});
  }
  return pts;
}

HullVerdict check_graph_hull(const GridField &field, const OperatorSpec &spec, std::size_t sample_count, std::uint64_t seed,
                             int workers) {
  if (sample_count < 4 || sample_count > 500) {
    throw InvalidArgument(fmt::format("check_graph_hull: sample count must lie in [4, 500], got {}", sample_count));
  }
  HullVerdict v;
  const SweepPlan plan(spec, field);
  const auto &interior = plan.interior();
  v.queries = interior.size();
  std::array<GridField, 4> images{field, field, field, field};
  for (std::size_t o = 0; o < 4; ++o) plan.apply(field, kOperators[o], images[o], workers);

  const double lo = field.min();
  const double hi = field.max();
  const double range = hi - lo;
  v.tol = 1e-7 * range;
  v.worst_margin = std::numeric_limits<double>::infinity();
  v.worst_by_operator.fill(std::numeric_limits<double>::infinity());

  if (range <= 1e-14 * std::max(1.0, std::abs(hi))) {
    v.path = "interval";
    for (std::size_t o = 0; o < 4; ++o) {
      for (std::uint32_t idx : interior) {
        const double val = images[o][idx];
        v.worst_by_operator[o] = std::min(v.worst_by_operator[o], std::min(val - lo, hi - val));
      }
      v.worst_margin = std::min(v.worst_margin, v.worst_by_operator[o]);
    }
    v.status = v.worst_margin >= -v.tol ? Status::pass : Status::fail;
    return v;
  }

  const std::vector<Point3> pts = graph_sample(field, spec.domain, sample_count, seed);
  v.samples = pts.size();
  const ConvexHull3 hull(pts);
  v.path = hull.dimension() == 3 ? "solid" : "planar";

  struct Query {
    double margin;
    std::size_t op;
    std::uint32_t idx;
  };
  std::vector<Query> all;
  all.reserve(4 * interior.size());
  for (std::size_t o = 0; o < 4; ++o) {
    for (std::uint32_t idx : interior) {
      const Point2 p = field.node(idx);
      const double m = hull.signed_distance({p.x, p.y, images[o][idx]});
      all.push_back({m, o, idx});
      v.worst_by_operator[o] = std::min(v.worst_by_operator[o], m);
    }
    v.worst_margin = std::min(v.worst_margin, v.worst_by_operator[o]);
  }

  // LP cross-check on the tightest queries and a seeded random selection.
  constexpr std::size_t kTightest = 24;
  constexpr std::size_t kRandom = 40;
  std::vector<std::size_t> pick(all.size());
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  const std::size_t tight = std::min(kTightest, all.size());
  std::partial_sort(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(tight), pick.end(),
                    [&all](std::size_t a, std::size_t b) { return all[a].margin < all[b].margin; });
  std::vector<std::size_t> lp_set(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(tight));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::sample(pick.begin() + static_cast<std::ptrdiff_t>(tight), pick.end(), std::back_inserter(lp_set), kRandom, rng);

  v.lp_worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t q : lp_set) {
    const Query &query = all[q];
    const Point2 p = field.node(query.idx);
    const double val = images[query.op][query.idx];
    const auto extent = vertical_extent(pts, p.x, p.y);
    const double lp_margin = extent ? std::min(val - extent->first, extent->second - val) : -std::numeric_limits<double>::infinity();
    v.lp_worst_margin = std::min(v.lp_worst_margin, lp_margin);
    if ((query.margin >= -v.tol) != (lp_margin >= -v.tol)) ++v.disagreements;
    ++v.lp_checked;
  }

  const bool ok = v.worst_margin >= -v.tol && v.lp_worst_margin >= -v.tol && v.disagreements == 0;
  v.status = ok ? Status::pass : Status::fail;
  return v;
}

ValueAxisVerdict check_value_axis(const GridField &field, const OperatorSpec &spec, int workers) {
  ValueAxisVerdict v;
  const SweepPlan plan(spec, field);
  v.lo = field.min();
  v.hi = field.max();
  bool ok = true;
  GridField out = field;
  for (std::size_t o = 0; o < 4; ++o) {
    plan.apply(field, kOperators[o], out, workers);
    v.op_min[o] = std::numeric_limits<double>::infinity();
    v.op_max[o] = -std::numeric_limits<double>::infinity();
    for (std::uint32_t idx : plan.interior()) {
      v.op_min[o] = std::min(v.op_min[o], out[idx]);
      v.op_max[o] = std::max(v.op_max[o], out[idx]);
    }
    ok = ok && v.lo <= v.op_min[o] && v.op_max[o] <= v.hi;
  }
  v.status = ok ? Status::pass : Status::fail;
  return v;
}

namespace {

void fill_rough(GridField &u, std::mt19937_64 &rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = dist(rng);
}

void fill_smooth(GridField &u, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> wave(-3, 3);
  std::array<std::array<double, 4>, 4> modes{};
  for (auto &m : modes) m = {amp(rng), static_cast<double>(wave(rng)), static_cast<double>(wave(rng)), phase(rng)};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point2 p = u.node(i);
    double s = 0.0;
    for (const auto &m : modes) s += m[0] * std::cos(m[1] * p.x + m[2] * p.y + m[3]);
    u[i] = s;
  }
}

double sup_diff_interior(const GridField &a, const GridField &b, const std::vector<std::uint32_t> &interior) {
  double m = 0.0;
  for (std::uint32_t idx : interior) m = std::max(m, std::abs(a[idx] - b[idx]));
  return m;
}

} // namespace

OperatorVerdict check_operator_properties(const OperatorSpec &spec, double h, int pairs, std::uint64_t seed, int workers) {
  OperatorVerdict v;
  v.pairs = pairs;
  const GridField lattice = GridField::lattice_for(spec.domain, h);
  const SweepPlan plan(spec, lattice);
  const auto &interior = plan.interior();
  std::mt19937_64 rng(seed);

  GridField u = lattice;
  GridField w = lattice;
  GridField g = lattice;
  GridField ou = lattice;
  GridField ov = lattice;
  GridField ow = lattice;

  const auto in_range = [](const GridField &in, const GridField &out, const std::vector<std::uint32_t> &nodes) {
    const double lo = in.min();
    const double hi = in.max();
    return std::all_of(nodes.begin(), nodes.end(), [&](std::uint32_t idx) { return lo <= out[idx] && out[idx] <= hi; });
  };

  for (int p = 0; p < pairs; ++p) {
    if (p % 2 == 0) {
      fill_rough(u, rng, -1.0, 1.0);
      fill_rough(w, rng, -1.0, 1.0);
    } else {
      fill_smooth(u, rng);
      fill_smooth(w, rng);
    }
    fill_rough(g, rng, 0.0, 0.5);
    GridField vfield = u;
    for (std::size_t i = 0; i < u.size(); ++i) vfield[i] = u[i] + g[i];

    for (OperatorKind op : kOperators) {
      plan.apply(u, op, ou, workers);
      plan.apply(vfield, op, ov, workers);
      plan.apply(w, op, ow, workers);
      if (!ordered(ou, ov)) ++v.monotonicity_violations;
      v.worst_expansion = std::max(v.worst_expansion, sup_diff_interior(ou, ow, interior) - sup_norm_diff(u, w));
      v.worst_expansion = std::max(v.worst_expansion, sup_diff_interior(ou, ov, interior) - sup_norm_diff(u, vfield));
      if (!in_range(u, ou, interior)) ++v.range_violations;
      if (!in_range(vfield, ov, interior)) ++v.range_violations;
      if (!in_range(w, ow, interior)) ++v.range_violations;
    }
  }

  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int p = 0; p < std::max(1, pairs / 10); ++p) {
    const double a = coef(rng);
    const double b = coef(rng);
    const double c = coef(rng);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Point2 q = u.node(i);
      u[i] = a + b * q.x + c * q.y;
    }
    for (OperatorKind op : kOperators) {
      plan.apply(u, op, ou, workers);
      v.affine_defect = std::max(v.affine_defect, sup_diff_interior(u, ou, interior));
    }
  }

  const bool ok = v.monotonicity_violations == 0 && v.worst_expansion <= 1e-12 && v.range_violations == 0 && v.affine_defect <= 1e-10;
  v.status = ok ? Status::pass : Status::fail;
  return v;
}

RegularityVerdict check_regularity(const SolveReport &report) {
  RegularityVerdict v;
  v.tol = report.tol;
  const auto &d = report.d_trace;
  v.worst_increase = 0.0;
  for (std::size_t k = 1; k < d.size(); ++k) v.worst_increase = std::max(v.worst_increase, d[k] - d[k - 1]);
  v.final_d = d.empty() ? 0.0 : d.back();
  v.status = v.worst_increase <= 1e-12 && v.final_d <= v.tol ? Status::pass : Status::fail;
  return v;
}

ModulusReport equicontinuity_report(const Problem &problem, int n, int k_max, std::vector<double> t_grid, OperatorKind iteration,
                                    int workers) {
  if (t_grid.empty()) throw InvalidArgument("equicontinuity_report: empty t grid");
  if (std::any_of(t_grid.begin(), t_grid.end(), [](double t) { return !(t > 0.0); })) {
    throw InvalidArgument("equicontinuity_report: t values must be positive");
  }
  if (k_max < 0) throw InvalidArgument(fmt::format("equicontinuity_report: k_max must be >= 0, got {}", k_max));
  if (iteration != OperatorKind::T && iteration != OperatorKind::H) {
    throw InvalidArgument("equicontinuity_report: iteration must be T or H");
  }
  std::sort(t_grid.begin(), t_grid.end());

  ModulusReport r;
  r.n = n;
  r.iteration = iteration;
  r.t_grid = t_grid;
  const double alpha = problem.spec.params.alpha;
  r.rho = iteration == OperatorKind::T ? alpha : 0.5 * (1.0 + alpha);
  r.dist_min = std::pow(1.0 - problem.spec.params.epsilon, n);

  GridField u = build_initial(problem.domain(), problem.boundary, problem.h, problem.extension);
  const auto mask = subdomain_mask(u, problem.domain(), std::nextafter(r.dist_min, std::numeric_limits<double>::infinity()));
  r.nodes = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  if (r.nodes == 0) throw InvalidArgument(fmt::format("equicontinuity_report: no lattice node has dist > {}", r.dist_min));

  const SweepPlan plan(problem.spec, u);
  GridField next = u;
  for (int k = 0; k <= k_max; ++k) {
    std::vector<double> row;
    row.reserve(t_grid.size());
    for (double t : t_grid) row.push_back(modulus_estimate(u, mask, t));
    r.omega.push_back(std::move(row));
    if (k < k_max) {
      plan.apply(u, iteration, next, workers);
      std::swap(u, next);
    }
  }

  // minimize e subject to |omega - a rho^k - b t| <= e, a, b, e >= 0.
  LinearProgram lp;
  lp.c = {0.0, 0.0, 1.0};
  for (int k = 0; k <= k_max; ++k) {
    const double rk = std::pow(r.rho, k);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double om = r.omega[k][i];
      lp.a_le.push_back({rk, t_grid[i], -1.0});
      lp.b_le.push_back(om);
      lp.a_le.push_back({-rk, -t_grid[i], -1.0});
      lp.b_le.push_back(-om);
    }
  }
  const LpResult fit = solve_lp(lp);
  if (fit.status == LpStatus::optimal) {
    r.a_fit = fit.x[0];
    r.b_fit = fit.x[1];
  }
  r.fit_error = 0.0;
  r.monotone_in_t = true;
  r.bound_holds = true;
  for (int k = 0; k <= k_max; ++k) {
    const double rk = std::pow(r.rho, k);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double om = r.omega[k][i];
      r.fit_error = std::max(r.fit_error, std::abs(om - r.a_fit * rk - r.b_fit * t_grid[i]));
      if (i > 0 && om < r.omega[k][i - 1]) r.monotone_in_t = false;
      if (om > r.omega[0][i] + r.b_fit * t_grid[i] + 1e-12) r.bound_holds = false;
    }
  }
  return r;
}

nlohmann::json to_json(const ComparisonVerdict &v) {
  return {{"check", "comparison"},
          {"status", to_string(v.status)},
          {"reason", v.reason},
          {"extension", to_string(v.extension)},
          {"worst_final_violation", v.status == Status::vacuous ? 0.0 : v.worst_final_violation},
          {"min_gap", v.status == Status::vacuous ? 0.0 : v.min_gap},
          {"max_gap", v.status == Status::vacuous ? 0.0 : v.max_gap},
          {"lockstep_iterates", v.lockstep_iterates},
          {"iterate_violations", v.iterate_violations},
          {"iterations", v.report1 ? nlohmann::json{v.report1->iterations, v.report2->iterations} : nlohmann::json::array()}};
}

nlohmann::json to_json(const HullVerdict &v) {
  return {{"check", "hull"},
          {"status", to_string(v.status)},
          {"path", v.path},
          {"samples", v.samples},
          {"queries", v.queries},
          {"tol", v.tol},
          {"worst_margin", v.worst_margin},
          {"worst_by_operator", {{"S", v.worst_by_operator[0]}, {"M", v.worst_by_operator[1]}, {"T", v.worst_by_operator[2]}, {"H", v.worst_by_operator[3]}}},
          {"lp_checked", v.lp_checked},
          {"lp_worst_margin", v.lp_checked > 0 ? v.lp_worst_margin : 0.0},
          {"disagreements", v.disagreements}};
}

nlohmann::json to_json(const ValueAxisVerdict &v) {
  nlohmann::json ops;
  for (std::size_t o = 0; o < 4; ++o) ops[to_string(kOperators[o])] = {v.op_min[o], v.op_max[o]};
  return {{"check", "value_axis"}, {"status", to_string(v.status)}, {"lo", v.lo}, {"hi", v.hi}, {"operators", ops}};
}

nlohmann::json to_json(const OperatorVerdict &v) {
  return {{"check", "operators"},
          {"status", to_string(v.status)},
          {"pairs", v.pairs},
          {"monotonicity_violations", v.monotonicity_violations},
          {"worst_expansion", v.worst_expansion},
          {"range_violations", v.range_violations},
          {"affine_defect", v.affine_defect}};
}

nlohmann::json to_json(const RegularityVerdict &v) {
  return {{"check", "regularity"},
          {"status", to_string(v.status)},
          {"worst_increase", v.worst_increase},
          {"final_d", v.final_d},
          {"tol", v.tol}};
}

nlohmann::json to_json(const ModulusReport &r) {
  return {{"n", r.n},
          {"dist_min", r.dist_min},
          {"nodes", r.nodes},
          {"iteration", to_string(r.iteration)},
          {"rho", r.rho},
          {"t_grid", r.t_grid},
          {"omega", r.omega},
          {"a_fit", r.a_fit},
          {"b_fit", r.b_fit},
          {"fit_error", r.fit_error},
          {"monotone_in_t", r.monotone_in_t},
          {"bound_holds", r.bound_holds}};
}

} // namespace meanfix
