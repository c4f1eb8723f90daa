#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanfix/gridfield.hpp"
#include "meanfix/hull.hpp"
#include "meanfix/operators.hpp"
#include "meanfix/solver.hpp"

namespace meanfix {

enum class Status { pass, fail, vacuous };

const char *to_string(Status s);

// Comparison principle ------------------------------------------------------

struct ComparisonVerdict {
  Status status = Status::fail;
  std::string reason;
  /// Extension actually used for both problems. Natural extensions of
  /// boundary-ordered data need not be ordered off the boundary; the check
  /// then falls back to the projection extension, which is.
  Extension extension = Extension::natural;
  /// max over nodes of u1 - u2 for the final fields; pass needs <= 2 tol.
  double worst_final_violation = 0.0;
  double min_gap = 0.0; // min over nodes of u2 - u1
  double max_gap = 0.0;
  /// Iterates compared in lockstep and how many of them had a node with u1_k > u2_k.
  int lockstep_iterates = 0;
  int iterate_violations = 0;
  /// Absent for vacuous verdicts.
  std::optional<SolveReport> report1;
  std::optional<SolveReport> report2;

  bool pass() const { return status == Status::pass; }
};

/// Solves the problem with boundary data f1 and f2 and checks u1 <= u2 + 2 tol
/// nodewise, and u1_k <= u2_k exactly for every k reached by both runs.
/// If f1 > f2 somewhere on a boundary sample of `boundary_samples` points the
/// verdict is vacuous and no solve is run.
ComparisonVerdict check_comparison(const Problem &problem, const BoundaryData &f1, const BoundaryData &f2,
                                   int workers = 1, std::size_t boundary_samples = 4096);

// Graph hull ---------------------------------------------------------------

struct HullVerdict {
  Status status = Status::fail;
  std::string path;          // "interval", "planar" or "solid"
  std::size_t samples = 0;   // graph points in the hull
  std::size_t queries = 0;   // lattice nodes tested, per operator
  double tol = 0.0;          // 1e-7 * value range
  double worst_margin = 0.0; // smallest signed hull distance over all queries (negative = outside)
  std::array<double, 4> worst_by_operator{}; // S, M, T, H
  std::size_t lp_checked = 0;
  double lp_worst_margin = 0.0; // smallest vertical margin from the LP oracle
  std::size_t disagreements = 0;

  bool pass() const { return status == Status::pass; }
};

/// Hull of a sample of the graph {(x, u(x))}: every pinned node adjacent to
/// the interior (thinned evenly by angle if there are too many) and seeded
/// random interior nodes, `sample_count` in total. Every interior node x is
/// then tested with (x, Op u(x)) for Op in {S, M, T, H}. The facet test is
/// cross-checked by a vertical-extent LP on the tightest and on random
/// queries; pass needs both to accept and no sign disagreements.
/// Throws InvalidArgument for sample_count outside [4, 500].
HullVerdict check_graph_hull(const GridField &field, const OperatorSpec &spec, std::size_t sample_count,
                             std::uint64_t seed = 0, int workers = 1);

/// Graph samples used by check_graph_hull.
std::vector<Point3> graph_sample(const GridField &field, const Domain &domain, std::size_t sample_count, std::uint64_t seed);

// Value axis ---------------------------------------------------------------

struct ValueAxisVerdict {
  Status status = Status::fail;
  double lo = 0.0;
  double hi = 0.0;
  std::array<double, 4> op_min{};
  std::array<double, 4> op_max{};

  bool pass() const { return status == Status::pass; }
};

/// min u <= Op u <= max u at every interior node for all four operators, exactly.
ValueAxisVerdict check_value_axis(const GridField &field, const OperatorSpec &spec, int workers = 1);

// Operator properties --------------------------------------------------------

struct OperatorVerdict {
  Status status = Status::fail;
  int pairs = 0;
  int monotonicity_violations = 0;
  double worst_expansion = 0.0; // max of |Op u - Op v| - |u - v|
  int range_violations = 0;
  double affine_defect = 0.0; // max |Op a - a| over interior nodes, affine a

  bool pass() const { return status == Status::pass; }
};

/// Seeded random field pairs on the lattice of spacing h: ordered pairs for
/// monotonicity, arbitrary pairs for nonexpansiveness, each field for range
/// containment, and random affine fields for reproduction to 1e-10.
OperatorVerdict check_operator_properties(const OperatorSpec &spec, double h, int pairs, std::uint64_t seed, int workers = 1);

// Asymptotic regularity --------------------------------------------------------

struct RegularityVerdict {
  Status status = Status::fail;
  double worst_increase = 0.0; // max_k d_{k+1} - d_k
  double final_d = 0.0;
  double tol = 0.0;

  bool pass() const { return status == Status::pass; }
};

/// d_k non-increasing to 1e-12 and the last d_k <= tol.
RegularityVerdict check_regularity(const SolveReport &report);

// Equicontinuity ---------------------------------------------------------------

struct ModulusReport {
  int n = 0;
  double dist_min = 0.0; // (1 - epsilon)^n
  std::size_t nodes = 0; // lattice nodes in the subdomain
  OperatorKind iteration = OperatorKind::H;
  double rho = 0.0; // alpha for T, (1 + alpha) / 2 for H
  std::vector<double> t_grid;
  std::vector<std::vector<double>> omega; // omega[k][i] at t_grid[i]
  double a_fit = 0.0;
  double b_fit = 0.0;
  double fit_error = 0.0; // max |omega - a rho^k - b t|
  bool monotone_in_t = false;
  bool bound_holds = false; // omega_k(t) <= omega_0(t) + b_fit t on every recorded pair
};

/// Moduli of continuity of the iterates u_k = Op^k u_0 (Op = T or H) on
/// {dist(x, boundary) > (1 - epsilon)^n}, with a minimax fit of
/// a rho^k + b t, a, b >= 0. Throws InvalidArgument for an empty or
/// non-positive t_grid, k_max < 0, or an empty subdomain.
ModulusReport equicontinuity_report(const Problem &problem, int n, int k_max, std::vector<double> t_grid,
                                    OperatorKind iteration = OperatorKind::H, int workers = 1);

nlohmann::json to_json(const ComparisonVerdict &v);
nlohmann::json to_json(const HullVerdict &v);
nlohmann::json to_json(const ValueAxisVerdict &v);
nlohmann::json to_json(const OperatorVerdict &v);
nlohmann::json to_json(const RegularityVerdict &v);
nlohmann::json to_json(const ModulusReport &r);

} // namespace meanfix
