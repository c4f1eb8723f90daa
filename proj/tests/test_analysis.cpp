#include <doctest.h>

#include <cmath>
#include <random>

#include "meanfix/analysis.hpp"
#include "meanfix/error.hpp"
#include "meanfix/lp.hpp"
#include "oracles.hpp"

using namespace meanfix;

namespace {

const Domain kDisk = Domain::disk({0, 0}, 1);

Problem disk_problem(double alpha, BoundaryData f, double h, Extension ext = Extension::natural) {
  OperatorSpec spec(kDisk, make_params(kDisk, alpha), BallRule(8, 32));
  return Problem(spec, std::move(f), h, 1e-8, default_max_iter(alpha, 2.0, h), ext);
}

BoundaryData shifted(const BoundaryData &f, double c) {
  return {"shifted", [f, c](const Point2 &p, double th) { return f(p, th) + c; }};
}

} // namespace

TEST_CASE("comparison of constants and shifted affine data") {
  const Problem p = disk_problem(0.5, BoundaryData::constant(0), 1.0 / 16);
  auto v = check_comparison(p, BoundaryData::constant(0), BoundaryData::constant(1));
  CHECK(v.status == Status::pass);
  CHECK(v.min_gap == 1.0);
  CHECK(v.max_gap == 1.0);

  const BoundaryData x = BoundaryData::affine(0, 1, 0);
  v = check_comparison(p, x, shifted(x, 1.0));
  CHECK(v.status == Status::pass);
  CHECK(v.min_gap == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v.max_gap == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v.iterate_violations == 0);
}

TEST_CASE("comparison with a bump on the boundary") {
  const Problem p = disk_problem(0.0, BoundaryData::harmonic2(), 1.0 / 16);
  const BoundaryData f1 = BoundaryData::harmonic2();
  const BoundaryData f2{"bump", [f1](const Point2 &q, double th) { return f1(q, th) + 0.1 * (1 + std::cos(th)); }};
  const auto v = check_comparison(p, f1, f2);
  CHECK(v.status == Status::pass);
  CHECK(v.worst_final_violation <= 2 * p.tol);
  // u1 is a fixed point from the start; u2 iterates.
  CHECK(v.lockstep_iterates >= 1);
  CHECK(v.report2->iterations > 0);
  const auto j = to_json(v);
  CHECK(j["status"] == "pass");

  const auto reversed = check_comparison(p, f2, f1);
  CHECK(reversed.status == Status::vacuous);
  CHECK_FALSE(reversed.report1.has_value());
}

TEST_CASE("graph hull of a constant field takes the interval path") {
  const Problem p = disk_problem(0.0, BoundaryData::constant(3), 1.0 / 16);
  const auto v = check_graph_hull(build_initial(kDisk, p.boundary, p.h), p.spec, 100, 1);
  CHECK(v.status == Status::pass);
  CHECK(v.path == "interval");
}

TEST_CASE("graph hull of an affine field is planar with zero margin") {
  const Problem p = disk_problem(0.3, BoundaryData::affine(1, 2, -1), 1.0 / 16);
  const auto v = check_graph_hull(build_initial(kDisk, p.boundary, p.h), p.spec, 200, 2);
  CHECK(v.status == Status::pass);
  CHECK(v.path == "planar");
  CHECK(std::abs(v.worst_margin) <= 1e-10);
}

TEST_CASE("graph hull mid-iteration, confirmed by the LP oracle") {
  const Problem p = disk_problem(0.0, BoundaryData::harmonic2(), 1.0 / 32, Extension::projection);
  FixedPointIteration it(p, build_initial(kDisk, p.boundary, p.h, p.extension));
  for (int k = 0; k < 10; ++k) it.step();
  const auto v = check_graph_hull(it.current(), p.spec, 300, 3);
  CHECK(v.status == Status::pass);
  CHECK(v.path == "solid");
  CHECK(v.samples == 300);
  CHECK(v.lp_checked > 0);
  CHECK(v.disagreements == 0);
  CHECK(v.worst_margin >= -v.tol);

  // Independent check on a handful of queries: the LP vertical extent contains M u(x).
  const auto pts = graph_sample(it.current(), kDisk, 300, 3);
  int checked = 0;
  for (std::size_t i = 0; i < it.current().size() && checked < 20; i += 37) {
    if (it.current().kind(i) != NodeKind::interior) continue;
    const Point2 x = it.current().node(i);
    const auto ext = vertical_extent(pts, x.x, x.y);
    if (!ext) continue;
    ++checked;
    const double m = M_at(it.current(), p.spec, x);
    CHECK(m >= ext->first - v.tol);
    CHECK(m <= ext->second + v.tol);
  }
  CHECK(checked > 5);
  CHECK_THROWS_AS(check_graph_hull(it.current(), p.spec, 3), InvalidArgument);
}

TEST_CASE("value axis containment is exact") {
  std::mt19937_64 rng(10);
  const Problem p = disk_problem(0.7, BoundaryData::constant(0), 1.0 / 32);
  GridField u = GridField::lattice_for(kDisk, p.h);
  std::uniform_real_distribution<double> val(-1, 1);
  for (auto &x : u.values()) x = val(rng);
  const auto v = check_value_axis(u, p.spec);
  CHECK(v.status == Status::pass);
  for (int k = 0; k < 4; ++k) {
    CHECK(v.op_min[k] >= v.lo);
    CHECK(v.op_max[k] <= v.hi);
  }
}

TEST_CASE("operator property suite") {
  for (double alpha : {0.0, 0.5, 0.9}) {
    const OperatorSpec spec(kDisk, make_params(kDisk, alpha), BallRule(8, 32));
    const auto v = check_operator_properties(spec, 1.0 / 16, 20, 42);
    CHECK(v.status == Status::pass);
    CHECK(v.monotonicity_violations == 0);
    CHECK(v.range_violations == 0);
    CHECK(v.worst_expansion <= 1e-12);
    CHECK(v.affine_defect <= 1e-10);
  }
}

TEST_CASE("regularity") {
  const Problem p = disk_problem(0.5, BoundaryData::cos_k_theta(2), 1.0 / 16, Extension::projection);
  const SolveReport r = solve(p);
  CHECK(check_regularity(r).status == Status::pass);

  SolveReport bad = r;
  bad.d_trace = {1.0, 0.5, 0.6, 1e-9};
  const auto v = check_regularity(bad);
  CHECK(v.status == Status::fail);
  CHECK(v.worst_increase == doctest::Approx(0.1));
  bad.d_trace = {1.0, 0.5, 0.1};
  CHECK(check_regularity(bad).status == Status::fail);
}

TEST_CASE("equicontinuity report") {
  const std::vector<double> t{0.0625, 0.125, 0.25};
  const Problem c = disk_problem(0.5, BoundaryData::constant(1), 1.0 / 16);
  auto r = equicontinuity_report(c, 1, 5, t);
  for (const auto &row : r.omega) for (double w : row) CHECK(w == 0.0);

  const Problem a = disk_problem(0.5, BoundaryData::affine(0, 3, 0), 1.0 / 16);
  r = equicontinuity_report(a, 1, 5, t);
  for (const auto &row : r.omega) {
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(row[i] == doctest::Approx(3 * t[i]).epsilon(1e-9));
  }
  CHECK(r.b_fit == doctest::Approx(3.0).epsilon(1e-6));

  const Problem h2 = disk_problem(0.5, BoundaryData::harmonic2(), 1.0 / 16, Extension::projection);
  r = equicontinuity_report(h2, 1, 20, {0.25, 0.0625, 0.125});
  CHECK(r.monotone_in_t);
  CHECK(r.t_grid == t);
  CHECK(r.omega.size() == 21);
  CHECK(r.rho == doctest::Approx(0.75));
  CHECK(r.dist_min == doctest::Approx(0.75));
  for (const auto &row : r.omega) {
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= row[i - 1]);
  }
  CHECK(to_json(r).contains("omega"));

  CHECK_THROWS_AS(equicontinuity_report(h2, 1, 5, {}), InvalidArgument);
  CHECK_THROWS_AS(equicontinuity_report(h2, 1, 5, {-0.1}), InvalidArgument);
  CHECK_THROWS_AS(equicontinuity_report(h2, 0, 5, t), InvalidArgument);
}
