#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "meanfix/geometry.hpp"

namespace meanfix {

/// Parameters of the averaging operator and of the power-law radius
/// r(x) = lambda * dist(x, boundary)^beta.
struct RadiusParams {
  double alpha = 0.0;   // weight of the midrange operator, in [0, 1)
  double epsilon = 0.5; // in (0, 1 - alpha)
  double beta = 1.0;    // >= 1
  double lambda = 0.45; // > 0
};

/// alpha = (p - 2) / (d + p). Throws InvalidArgument for p < 2 or d < 1.
double alpha_from_p(double p, int d);

/// Strict upper bound for beta, log(1/alpha) / log(1/(1 - epsilon)).
/// std::nullopt means unbounded (alpha = 0). Throws on out-of-range input.
std::optional<double> beta_max(double alpha, double epsilon);

/// Strict upper bound for lambda, min{epsilon, 1/beta} (2 / diam)^(beta - 1).
double lambda_max(const Domain &domain, double epsilon, double beta);

/// Largest lambda for which lambda * dist^beta is 1-Lipschitz on a convex
/// domain: (1/beta) (2 / diam)^(beta - 1).
double lipschitz_lambda(const Domain &domain, double beta);

enum class Constraint { alpha_range, epsilon_range, beta_lower, beta_upper, lambda_lower, lambda_upper };

const char *to_string(Constraint c);

struct Violation {
  Constraint constraint;
  double value = 0.0; // offending parameter value
  double bound = 0.0; // the bound it violates
  std::string message;
};

/// Every violated admissibility condition; empty means the parameters are
/// admissible for this domain.
std::vector<Violation> validate_params(const RadiusParams &params, const Domain &domain);

/// Fills unspecified values with the defaults: epsilon = (1 - alpha) / 2,
/// beta = 1, lambda = 0.9 * min(lambda_max, lipschitz_lambda). Does not validate.
RadiusParams make_params(const Domain &domain, double alpha, std::optional<double> epsilon = std::nullopt,
                         std::optional<double> beta = std::nullopt, std::optional<double> lambda = std::nullopt);

/// lambda * dist(x)^beta. Throws InvalidArgument unless x is interior.
double radius_at(const RadiusParams &params, const Domain &domain, const Point2 &x);

/// Same formula from a precomputed boundary distance.
inline double radius_from_distance(const RadiusParams &params, double dist) {
  return params.beta == 1.0 ? params.lambda * dist : params.lambda * std::pow(dist, params.beta);
}

} // namespace meanfix
