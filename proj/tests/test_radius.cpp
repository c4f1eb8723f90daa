#include <doctest.h>

#include <cmath>
#include <random>

#include "meanfix/error.hpp"
#include "meanfix/radius.hpp"

using namespace meanfix;

namespace {

const Domain kDisk = Domain::disk({0, 0}, 1);

bool has(const std::vector<Violation> &v, Constraint c) {
  return std::any_of(v.begin(), v.end(), [c](const Violation &x) { return x.constraint == c; });
}

} // namespace

TEST_CASE("alpha from p") {
  CHECK(alpha_from_p(2, 2) == 0.0);
  CHECK(alpha_from_p(4, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(alpha_from_p(10, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_from_p(1.5, 2), InvalidArgument);
}

TEST_CASE("beta_max") {
  CHECK_FALSE(beta_max(0.0, 0.5).has_value());
  CHECK(*beta_max(0.5, 0.25) == doctest::Approx(std::log(2.0) / std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(*beta_max(0.5, 0.25) == doctest::Approx(2.4094).epsilon(1e-4));
  CHECK(*beta_max(0.9, 0.05) == doctest::Approx(2.0539).epsilon(1e-4));
  CHECK_THROWS_AS(beta_max(0.5, 0.6), InvalidArgument);
  CHECK_THROWS_AS(beta_max(1.0, 0.1), InvalidArgument);
}

TEST_CASE("beta_max decreases in alpha and in epsilon") {
  for (double eps : {0.01, 0.05, 0.1}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double a = 0.05; a < 0.85; a += 0.05) {
      const double b = *beta_max(a, eps);
      CHECK(b < prev);
      prev = b;
    }
  }
  for (double a : {0.1, 0.5, 0.8}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double eps = 0.01; eps < 1.0 - a; eps += 0.01) {
      const double b = *beta_max(a, eps);
      CHECK(b < prev);
      prev = b;
    }
  }
}

TEST_CASE("lambda_max") {
  CHECK(lambda_max(kDisk, 0.3, 1) == doctest::Approx(0.3));
  CHECK(lambda_max(kDisk, 0.3, 2) == doctest::Approx(0.3));
  CHECK(lambda_max(Domain::ellipse({0, 0}, 2, 1), 0.3, 2) == doctest::Approx(0.15));
  CHECK(lipschitz_lambda(kDisk, 2) == doctest::Approx(0.5));
}

TEST_CASE("validate_params") {
  CHECK(validate_params({0.5, 0.25, 2, 0.1}, kDisk).empty());
  const auto eps = validate_params({0.5, 0.6, 1, 0.1}, kDisk);
  CHECK(has(eps, Constraint::epsilon_range));
  const auto beta = validate_params({0.5, 0.25, 3, 0.1}, kDisk);
  REQUIRE(beta.size() == 1);
  CHECK(beta[0].constraint == Constraint::beta_upper);
  CHECK(beta[0].bound == doctest::Approx(2.4094).epsilon(1e-4));
  CHECK(has(validate_params({0.5, 0.25, 0.5, 0.1}, kDisk), Constraint::beta_lower));
  CHECK(has(validate_params({0.5, 0.25, 1, 0.0}, kDisk), Constraint::lambda_lower));
  CHECK(has(validate_params({0.5, 0.25, 1, 0.25}, kDisk), Constraint::lambda_upper));
  CHECK(has(validate_params({1.0, 0.25, 1, 0.1}, kDisk), Constraint::alpha_range));
}

TEST_CASE("defaults are admissible") {
  for (double a : {0.0, 0.3, 0.6, 0.9}) {
    for (const Domain &d : {kDisk, Domain::ellipse({0, 0}, 2, 1), Domain::pnorm_ball({0, 0}, 1, 4)}) {
      CHECK(validate_params(make_params(d, a), d).empty());
      CHECK(validate_params(make_params(d, a, std::nullopt, 1.5), d).empty());
    }
  }
}

TEST_CASE("radius_at") {
  CHECK(radius_at({0, 0.5, 1, 0.25}, kDisk, {0, 0}) == doctest::Approx(0.25));
  CHECK(radius_at({0, 0.5, 2, 0.25}, kDisk, {0.5, 0}) == doctest::Approx(0.0625));
  CHECK_THROWS_AS(radius_at({0, 0.5, 1, 0.25}, kDisk, {1, 0}), InvalidArgument);
  CHECK_THROWS_AS(radius_at({0, 0.5, 1, 0.25}, kDisk, {2, 0}), InvalidArgument);
}

TEST_CASE("admissible radii are 1-Lipschitz and keep balls inside") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const Domain &d : {kDisk, Domain::ellipse({0, 0}, 2, 1), Domain::pnorm_ball({0, 0}, 1, 4)}) {
    for (double beta : {1.0, 1.5, 2.0}) {
      const RadiusParams p = make_params(d, 0.3, std::nullopt, beta);
      REQUIRE(validate_params(p, d).empty());
      int tested = 0;
      while (tested < 300) {
        const Point2 x{u(rng), u(rng)};
        const Point2 y{u(rng), u(rng)};
        if (d.contains(x) != Containment::interior || d.contains(y) != Containment::interior) continue;
        ++tested;
        const double rx = radius_at(p, d, x);
        CHECK(std::abs(rx - radius_at(p, d, y)) <= distance(x, y) + 1e-12);
        CHECK(rx <= d.dist_to_boundary(x));
      }
    }
  }
}
