#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanfix/gridfield.hpp"
#include "meanfix/operators.hpp"

namespace meanfix {

/// The discrete Dirichlet problem T_alpha u = u in the domain, u = f on the
/// boundary, on a lattice of spacing h.
struct Problem {
  Problem(OperatorSpec spec, BoundaryData boundary, double h, double tol, int max_iter,
          Extension extension = Extension::natural);

  OperatorSpec spec;
  BoundaryData boundary;
  double h;
  double tol;
  int max_iter;
  Extension extension;

  const Domain &domain() const { return spec.domain; }
};

/// 50 / (1 - alpha) * diam / h, rounded up.
int default_max_iter(double alpha, double diameter, double h);

enum class Termination { converged, max_iter };

const char *to_string(Termination t);

struct SolveReport {
  GridField field;
  int iterations = 0;
  Termination termination = Termination::max_iter;
  double tol = 0.0;
  /// d_trace[k] = |H u_k - u_k|_inf = |u_{k+1} - u_k|_inf.
  std::vector<double> d_trace;
  /// residual_trace[k] = |T u_k - u_k|_inf over interior nodes.
  std::vector<double> residual_trace;
  /// A posteriori bound on |u_final - u*|_inf, d_k / (1 - rho) with rho the
  /// largest contraction ratio d_j / d_{j-1} seen over the trailing window.
  double error_estimate = 0.0;
  double wall_ms = 0.0;
};

struct SolveOptions {
  int workers = 1;
  /// Called with (k, u_k) for every iterate, including u_0 and the final one.
  std::function<void(int, const GridField &)> observer;
};

/// Stepwise form of the solver, for callers that need to drive several
/// iterations in lockstep.
///
/// Stopping rule: u_k is accepted when |T u_k - u_k| <= tol and the error
/// estimate d_k / (1 - rho) <= kEstimateSafety * tol. Fewer than kRateWindow observed ratios
/// fall back to rho = 1 - 1/max_iter. The second condition matters because
/// near the boundary the radii shrink with the distance and H contracts
/// slowly, so a small residual alone can sit far above the actual error.
/// The ratios creep up towards the asymptotic rate, so the windowed rho
/// runs slightly low; the safety factor absorbs that.
class FixedPointIteration {
 public:
  static constexpr int kRateWindow = 20;
  static constexpr double kEstimateSafety = 0.5;

  FixedPointIteration(const Problem &problem, GridField initial, int workers = 1);

  /// Applies one H sweep to the current iterate unless done(). Returns done().
  bool step();
  bool done() const { return done_; }

  int k() const { return k_; }
  const GridField &current() const { return current_; }
  const std::vector<double> &d_trace() const { return d_trace_; }
  const std::vector<double> &residual_trace() const { return residual_trace_; }
  Termination termination() const { return termination_; }
  double error_estimate() const { return error_estimate_; }

  SolveReport report() &&;

 private:
  void evaluate();

  const Problem *problem_;
  SweepPlan plan_;
  int workers_;
  GridField current_;
  GridField next_;
  int k_ = 0;
  bool done_ = false;
  Termination termination_ = Termination::max_iter;
  double error_estimate_ = 0.0;
  std::deque<double> ratios_;
  std::vector<double> d_trace_;
  std::vector<double> residual_trace_;
};

/// Iterates u_{k+1} = H u_k from u_0 = build_initial(...) until the stopping
/// rule accepts or max_iter sweeps have been applied. Throws NonFiniteValue
/// if an iterate stops being finite.
SolveReport solve(const Problem &problem, const SolveOptions &options = {});

/// Same iteration from a caller-supplied initial field on the problem lattice.
SolveReport solve_from(const Problem &problem, GridField initial, const SolveOptions &options = {});

/// max over interior nodes |T u - u|.
double residual(const GridField &field, const OperatorSpec &spec, int workers = 1);

/// A second continuous extension of f: the initial field pulled towards the
/// mean of the pinned values, by a factor 1 - dist / max_dist that is 1 on
/// the boundary and 0 at the deepest interior node.
GridField damped_initial(const Problem &problem);

/// Solves from every initial field and returns the largest pairwise sup
/// distance between the results. Requires at least two initial fields.
double uniqueness_probe(const Problem &problem, const std::vector<GridField> &initial_fields,
                        const SolveOptions &options = {});

/// {iterations, termination, tol, error_estimate, residual_trace, d_k_trace, wall_ms}
nlohmann::json to_json(const SolveReport &report);

} // namespace meanfix
