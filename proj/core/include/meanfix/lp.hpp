#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "meanfix/hull.hpp"

namespace meanfix {

/// minimize c.x subject to A_eq x = b_eq, A_le x <= b_le, x >= 0.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<std::vector<double>> a_le;
  std::vector<double> b_le;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase tableau simplex with Bland's rule. Intended for small
/// problems (a few hundred columns).
LpResult solve_lp(const LinearProgram &lp);

/// The interval {z : (x, y, z) in conv(points)}, from two LPs over convex
/// weights. std::nullopt when (x, y) is outside the planar shadow of the hull.
std::optional<std::pair<double, double>> vertical_extent(std::span<const Point3> points, double x, double y);

} // namespace meanfix
