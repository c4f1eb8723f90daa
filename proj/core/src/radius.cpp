#include "meanfix/radius.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "meanfix/error.hpp"

namespace meanfix {

double alpha_from_p(double p, int d) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument(fmt::format("p must be >= 2, got {}", p));
  if (d < 1) throw InvalidArgument(fmt::format("dimension must be >= 1, got {}", d));
  return (p - 2.0) / (d + p);
}

std::optional<double> beta_max(double alpha, double epsilon) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument(fmt::format("alpha must be in [0, 1), got {}", alpha));
  if (!(epsilon > 0.0 && epsilon < 1.0 - alpha))
    throw InvalidArgument(fmt::format("epsilon must be in (0, 1 - alpha), got {}", epsilon));
  if (alpha == 0.0) return std::nullopt;
  return std::log(1.0 / alpha) / std::log(1.0 / (1.0 - epsilon));
}

double lambda_max(const Domain &domain, double epsilon, double beta) {
  if (!(beta >= 1.0)) throw InvalidArgument(fmt::format("beta must be >= 1, got {}", beta));
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument(fmt::format("epsilon must be in (0, 1), got {}", epsilon));
  return std::min(epsilon, 1.0 / beta) * std::pow(2.0 / domain.diameter(), beta - 1.0);
}

double lipschitz_lambda(const Domain &domain, double beta) {
  if (!(beta >= 1.0)) throw InvalidArgument(fmt::format("beta must be >= 1, got {}", beta));
  return std::pow(2.0 / domain.diameter(), beta - 1.0) / beta;
}

const char *to_string(Constraint c) {
  switch (c) {
    case Constraint::alpha_range:
      return "alpha_range";
    case Constraint::epsilon_range:
      return "epsilon_range";
    case Constraint::beta_lower:
      return "beta_lower";
    case Constraint::beta_upper:
      return "beta_upper";
    case Constraint::lambda_lower:
      return "lambda_lower";
    case Constraint::lambda_upper:
      return "lambda_upper";
  }
  return "unknown";
}

std::vector<Violation> validate_params(const RadiusParams &params, const Domain &domain) {
  std::vector<Violation> out;
  const auto [alpha, epsilon, beta, lambda] = params;

  const bool alpha_ok = alpha >= 0.0 && alpha < 1.0;
  if (!alpha_ok) {
    out.push_back({Constraint::alpha_range, alpha, alpha < 0.0 ? 0.0 : 1.0,
                   fmt::format("alpha = {} outside [0, 1)", alpha)});
  }

  const bool epsilon_ok = epsilon > 0.0 && (!alpha_ok || epsilon < 1.0 - alpha) && epsilon < 1.0;
  if (!epsilon_ok) {
    const double bound = epsilon <= 0.0 ? 0.0 : (alpha_ok ? 1.0 - alpha : 1.0);
    out.push_back({Constraint::epsilon_range, epsilon, bound,
                   epsilon <= 0.0 ? fmt::format("epsilon = {} must be > 0", epsilon)
                                  : fmt::format("epsilon = {} >= 1 - alpha = {}", epsilon, bound)});
  }

  const bool beta_ok = beta >= 1.0;
  if (!beta_ok) out.push_back({Constraint::beta_lower, beta, 1.0, fmt::format("beta = {} < 1", beta)});

  if (alpha_ok && epsilon_ok && beta_ok) {
    if (const auto bmax = beta_max(alpha, epsilon); bmax && !(beta < *bmax)) {
      out.push_back({Constraint::beta_upper, beta, *bmax, fmt::format("beta = {} >= beta_max = {}", beta, *bmax)});
    }
  }

  if (!(lambda > 0.0)) {
    out.push_back({Constraint::lambda_lower, lambda, 0.0, fmt::format("lambda = {} must be > 0", lambda)});
  } else if (epsilon_ok && beta_ok) {
    const double lmax = lambda_max(domain, epsilon, beta);
    if (!(lambda < lmax)) {
      out.push_back({Constraint::lambda_upper, lambda, lmax, fmt::format("lambda = {} >= lambda_max = {}", lambda, lmax)});
    }
  }
  return out;
}

RadiusParams make_params(const Domain &domain, double alpha, std::optional<double> epsilon,
                         std::optional<double> beta, std::optional<double> lambda) {
  RadiusParams p;
  p.alpha = alpha;
  p.epsilon = epsilon.value_or(0.5 * (1.0 - alpha));
  p.beta = beta.value_or(1.0);
  if (lambda) {
    p.lambda = *lambda;
  } else {
    p.lambda = 0.9 * std::min(lambda_max(domain, p.epsilon, p.beta), lipschitz_lambda(domain, p.beta));
  }
  return p;
}

double radius_at(const RadiusParams &params, const Domain &domain, const Point2 &x) {
  if (domain.contains(x) != Containment::interior) {
    throw InvalidArgument(fmt::format("radius undefined at non-interior point ({}, {})", x.x, x.y));
  }
  return radius_from_distance(params, domain.dist_to_boundary(x));
}

} // namespace meanfix
