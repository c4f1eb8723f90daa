#include "meanfix/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "meanfix/error.hpp"

namespace meanfix {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows) {}

  std::vector<double> &row(std::size_t i) { return t_[i]; }
  double rhs(std::size_t i) const { return t_[i][n_]; }
  std::size_t &basis(std::size_t i) { return basis_[i]; }

  // Reduced-cost row for cost vector c; obj[n_] holds -objective.
  void price(const std::vector<double> &c) {
    obj_.assign(n_ + 1, 0.0);
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) obj_[j] -= cb * t_[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    auto &pr = t_[r];
    const double inv = 1.0 / pr[col];
    for (double &v : pr) v *= inv;
    pr[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) t_[i][j] -= f * pr[j];
      t_[i][col] = 0.0;
    }
    const double f = obj_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= n_; ++j) obj_[j] -= f * pr[j];
      obj_[col] = 0.0;
    }
    basis_[r] = col;
  }

  // Bland's rule iterations over columns [0, allowed). Returns false if unbounded.
  bool optimize(std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (obj_[j] < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = t_[i][n_] / a;
        if (ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  double objective() const { return -obj_[n_]; }
  std::size_t rows() const { return m_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> obj_;
};

} // namespace

LpResult solve_lp(const LinearProgram &lp) {
  const std::size_t n = lp.c.size();
  const std::size_t n_eq = lp.a_eq.size();
  const std::size_t n_le = lp.a_le.size();
  if (lp.b_eq.size() != n_eq || lp.b_le.size() != n_le) throw InvalidArgument("solve_lp: row/rhs count mismatch");
  const std::size_t m = n_eq + n_le;
  const std::size_t n_struct = n + n_le;
  const std::size_t cols = n_struct + m;

  Tableau tab(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    const bool eq = i < n_eq;
    const auto &a = eq ? lp.a_eq[i] : lp.a_le[i - n_eq];
    double b = eq ? lp.b_eq[i] : lp.b_le[i - n_eq];
    if (a.size() != n) throw InvalidArgument(fmt::format("solve_lp: row {} has {} coefficients, expected {}", i, a.size(), n));
    auto &row = tab.row(i);
    std::copy(a.begin(), a.end(), row.begin());
    if (!eq) row[n + (i - n_eq)] = 1.0;
    double scale = std::abs(b);
    for (std::size_t j = 0; j < n_struct; ++j) scale = std::max(scale, std::abs(row[j]));
    if (scale == 0.0) scale = 1.0;
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_struct; ++j) row[j] *= sign / scale;
    b *= sign / scale;
    row[n_struct + i] = 1.0;
    row[cols] = b;
    tab.basis(i) = n_struct + i;
  }

  std::vector<double> phase1(cols, 0.0);
  for (std::size_t j = n_struct; j < cols; ++j) phase1[j] = 1.0;
  tab.price(phase1);
  tab.optimize(cols);
  LpResult result;
  if (tab.objective() > kFeasTol) {
    result.status = LpStatus::infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows where that fails are redundant.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < n_struct) continue;
    for (std::size_t j = 0; j < n_struct; ++j) {
      if (std::abs(tab.row(i)[j]) > kPivotTol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  std::copy(lp.c.begin(), lp.c.end(), phase2.begin());
  tab.price(phase2);
  if (!tab.optimize(n_struct)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < n) result.x[tab.basis(i)] = std::max(0.0, tab.rhs(i));
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.c[j] * result.x[j];
  return result;
}

std::optional<std::pair<double, double>> vertical_extent(std::span<const Point3> points, double x, double y) {
  LinearProgram lp;
  const std::size_t n = points.size();
  lp.a_eq.assign(3, std::vector<double>(n, 0.0));
  lp.b_eq = {0.0, 0.0, 1.0};
  lp.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    lp.a_eq[0][i] = points[i].x - x;
    lp.a_eq[1][i] = points[i].y - y;
    lp.a_eq[2][i] = 1.0;
    lp.c[i] = points[i].z;
  }
  const LpResult low = solve_lp(lp);
  if (low.status != LpStatus::optimal) return std::nullopt;
  for (double &c : lp.c) c = -c;
  const LpResult high = solve_lp(lp);
  if (high.status != LpStatus::optimal) return std::nullopt;
  return std::pair{low.objective, -high.objective};
}

} // namespace meanfix
