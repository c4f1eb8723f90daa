#include <doctest.h>

#include <cmath>
#include <random>

#include "meanfix/error.hpp"
#include "meanfix/operators.hpp"
#include "meanfix/solver.hpp"
#include "oracles.hpp"

using namespace meanfix;

namespace {

const Domain kDisk = Domain::disk({0, 0}, 1);

OperatorSpec disk_spec(double alpha, std::optional<double> lambda = std::nullopt) {
  return OperatorSpec(kDisk, make_params(kDisk, alpha, std::nullopt, std::nullopt, lambda), BallRule(8, 32));
}

GridField radial_square(double h) {
  GridField u = GridField::lattice_for(kDisk, h);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = dot(u.node(i), u.node(i));
  return u;
}

} // namespace

TEST_CASE("ball rule") {
  const BallRule rule(8, 32);
  CHECK(rule.size() == 256);
  double wsum = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    wsum += rule.weights()[k];
    m2 += rule.weights()[k] * dot(rule.nodes()[k], rule.nodes()[k]);
    const Point2 a = rule.nodes()[k];
    const Point2 b = rule.nodes()[rule.antipode(k)];
    CHECK(a.x == -b.x);
    CHECK(a.y == -b.y);
    CHECK(dot(a, a) < 1.0);
  }
  CHECK(std::abs(wsum - 1.0) <= 1e-14);
  CHECK(std::abs(m2 - 0.5) <= 1e-12);

  CHECK_THROWS_AS(BallRule(1, 32), InvalidArgument);
  CHECK_THROWS_AS(BallRule(8, 7), InvalidArgument);
}

TEST_CASE("Monte Carlo agrees with the second moment of the unit disk") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 10'000'000;
  double sum = 0.0;
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const double r2 = x * x + y * y;
    if (r2 >= 1.0) continue;
    sum += r2;
    ++accepted;
  }
  const double mc = sum / accepted;
  const double sigma = std::sqrt(1.0 / 12.0 / accepted); // Var |p|^2 = 1/3 - 1/4
  CHECK(std::abs(mc - 0.5) <= 3.0 * sigma);
}

TEST_CASE("constant fields are reproduced by every operator") {
  GridField u = GridField::lattice_for(kDisk, 0.05);
  for (auto &v : u.values()) v = -2.5;
  const OperatorSpec spec = disk_spec(0.4);
  for (const Point2 x : {Point2{0, 0}, Point2{0.3, -0.6}, Point2{0.9, 0.1}}) {
    for (auto op : {OperatorKind::S, OperatorKind::M, OperatorKind::T, OperatorKind::H}) CHECK(apply_at(u, spec, op, x) == -2.5);
  }
}

TEST_CASE("second moment field at the center") {
  const double h = 1.0 / 128;
  const GridField u = radial_square(h);
  for (double alpha : {0.0, 0.3, 0.9}) {
    const OperatorSpec spec = disk_spec(alpha, alpha == 0.9 ? 0.045 : 0.3);
    const double r = spec.params.lambda;
    const double m = M_at(u, spec, {0, 0});
    const double s = S_at(u, spec, {0, 0});
    // Bilinear interpolation of a convex quadratic overshoots by at most h^2 / 4 per coordinate.
    CHECK(m >= r * r / 2 - 1e-15);
    CHECK(m <= r * r / 2 + h * h / 2);
    // Outer ring sits at radius r sqrt(1 - 1 / (2 n_r)); the center sample is 0.
    CHECK(std::abs(s - r * r / 2) <= r * r / (4 * 8) + h * h);
    CHECK(s == doctest::Approx(0.5 * r * r * (1 - 1.0 / 16)).epsilon(h * h / (r * r) * 4));
    const double t = T_alpha_at(u, spec, {0, 0});
    CHECK(t == doctest::Approx(alpha * s + (1 - alpha) * m).epsilon(1e-14));
    CHECK(std::abs(t - r * r / 2) <= r * r / 32 + h * h);
    CHECK(H_alpha_at(u, spec, {0, 0}) == doctest::Approx(0.5 * t).epsilon(1e-14));
    CHECK(std::abs(H_alpha_at(u, spec, {0, 0}) - r * r / 4) <= r * r / 64 + h * h);
  }
}

TEST_CASE("alpha = 0 gives T = M exactly") {
  std::mt19937_64 rng(1);
  GridField u = GridField::lattice_for(kDisk, 0.04);
  oracle::fill_trig(u, rng);
  const OperatorSpec spec = disk_spec(0.0);
  for (const Point2 x : {Point2{0.1, 0.2}, Point2{-0.5, 0.5}, Point2{0, -0.95}}) CHECK(T_alpha_at(u, spec, x) == M_at(u, spec, x));
}

TEST_CASE("pointwise operators match the reference ball evaluation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-1, 1);
  for (const Domain &d : {kDisk, Domain::ellipse({0, 0}, 2, 1), Domain::pnorm_ball({0, 0}, 1, 4)}) {
    const OperatorSpec spec(d, make_params(d, 0.5), BallRule(8, 32));
    GridField u = GridField::lattice_for(d, 0.03);
    oracle::fill_trig(u, rng);
    int tested = 0;
    while (tested < 100) {
      const Point2 x{2 * pos(rng), pos(rng)};
      if (d.contains(x) != Containment::interior) continue;
      ++tested;
      const double r = radius_at(spec.params, d, x);
      const auto ref = oracle::ball(u, x, r);
      const double c = oracle::bilinear(u, x.x, x.y);
      CHECK(M_at(u, spec, x) == doctest::Approx(ref.mean).epsilon(1e-12));
      CHECK(S_at(u, spec, x) == doctest::Approx(ref.mid).epsilon(1e-12));
      const double t = 0.5 * ref.mid + 0.5 * ref.mean;
      CHECK(T_alpha_at(u, spec, x) == doctest::Approx(t).epsilon(1e-12));
      CHECK(H_alpha_at(u, spec, x) == doctest::Approx(0.5 * (c + t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sweeps reproduce affine and constant fields") {
  for (double alpha : {0.0, 0.5, 0.9}) {
    for (const Domain &d : {kDisk, Domain::ellipse({0.2, 0}, 1.5, 0.7)}) {
      const OperatorSpec spec(d, make_params(d, alpha), BallRule(8, 32));
      GridField u = GridField::lattice_for(d, 0.05);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1 + 2 * u.node(i).x - u.node(i).y;
      GridField c = u;
      for (auto &v : c.values()) v = 4.0;
      for (auto op : {OperatorKind::S, OperatorKind::M, OperatorKind::T, OperatorKind::H}) {
        CHECK(sup_norm_diff(sweep(u, spec, op), u) <= 1e-10);
        CHECK(sup_norm_diff(sweep(c, spec, op), c) == 0.0);
      }
    }
  }
}

TEST_CASE("sweeps agree with pointwise evaluation and do not depend on the worker count") {
  std::mt19937_64 rng(21);
  const OperatorSpec spec = disk_spec(0.3);
  GridField u = GridField::lattice_for(kDisk, 0.05);
  oracle::fill_trig(u, rng);
  for (auto op : {OperatorKind::S, OperatorKind::M, OperatorKind::T, OperatorKind::H}) {
    const GridField one = sweep(u, spec, op, 1);
    const GridField three = sweep(u, spec, op, 3);
    CHECK(sup_norm_diff(one, three) == 0.0);
    for (std::size_t i = 0; i < u.size(); i += 7) {
      if (u.kind(i) == NodeKind::pinned) {
        CHECK(one[i] == u[i]);
      } else {
        CHECK(one[i] == doctest::Approx(apply_at(u, spec, op, u.node(i))).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("one H sweep lowers the residual of the projected initial field") {
  const OperatorSpec spec = disk_spec(0.0);
  const GridField u0 = build_initial(kDisk, BoundaryData::harmonic2(), 1.0 / 32, Extension::projection);
  const GridField u1 = sweep(u0, spec, OperatorKind::H);
  CHECK(residual(u1, spec) < residual(u0, spec));
}

TEST_CASE("inadmissible parameters are rejected") {
  CHECK_THROWS_AS(OperatorSpec(kDisk, {0.5, 0.6, 1, 0.1}, BallRule(8, 32)), InvalidArgument);
  const OperatorSpec spec = disk_spec(0.0);
  GridField u = GridField::lattice_for(kDisk, 0.1);
  CHECK_THROWS_AS(M_at(u, spec, {1.0, 0.0}), InvalidArgument);
  GridField other = GridField::lattice_for(kDisk, 0.2);
  SweepPlan plan(spec, u);
  CHECK_THROWS_AS(plan.apply(other, OperatorKind::H, other), InvalidArgument);
}
