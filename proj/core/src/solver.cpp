#include "meanfix/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "meanfix/error.hpp"

namespace meanfix {

Problem::Problem(OperatorSpec spec_, BoundaryData boundary_, double h_, double tol_, int max_iter_, Extension extension_)
    : spec(std::move(spec_)), boundary(std::move(boundary_)), h(h_), tol(tol_), max_iter(max_iter_), extension(extension_) {
  if (!(h > 0.0)) throw InvalidArgument(fmt::format("problem: h must be positive, got {}", h));
  if (!(tol > 0.0)) throw InvalidArgument(fmt::format("problem: tol must be positive, got {}", tol));
  if (max_iter < 1) throw InvalidArgument(fmt::format("problem: max_iter must be >= 1, got {}", max_iter));
}

int default_max_iter(double alpha, double diameter, double h) {
  return static_cast<int>(std::ceil(50.0 / (1.0 - alpha) * diameter / h));
}

const char *to_string(Termination t) { return t == Termination::converged ? "converged" : "max_iter"; }

FixedPointIteration::FixedPointIteration(const Problem &problem, GridField initial, int workers)
    : problem_(&problem), plan_(problem.spec, initial), workers_(workers), current_(std::move(initial)), next_(current_) {
  evaluate();
}

// Computes H u_k into next_, records d_k and the residual of u_k, and decides
// whether u_k is accepted.
void FixedPointIteration::evaluate() {
  const double res = plan_.step_H(current_, next_, workers_);
  double d = 0.0;
  for (std::size_t i = 0; i < next_.size(); ++i) {
    const double value = next_[i];
    if (!std::isfinite(value)) throw NonFiniteValue(fmt::format("non-finite value at node {} in sweep {}", i, k_));
    d = std::max(d, std::abs(value - current_[i]));
  }

  if (!d_trace_.empty() && d_trace_.back() > 0.0) {
    ratios_.push_back(d / d_trace_.back());
    if (ratios_.size() > static_cast<std::size_t>(kRateWindow)) ratios_.pop_front();
  }
  d_trace_.push_back(d);
  residual_trace_.push_back(res);

  double rho = 1.0 - 1.0 / problem_->max_iter;
  if (ratios_.size() == static_cast<std::size_t>(kRateWindow)) rho = *std::max_element(ratios_.begin(), ratios_.end());
  error_estimate_ = d == 0.0 ? 0.0 : (rho < 1.0 ? d / (1.0 - rho) : std::numeric_limits<double>::infinity());

  if (res <= problem_->tol && error_estimate_ <= kEstimateSafety * problem_->tol) {
    done_ = true;
    termination_ = Termination::converged;
  } else if (k_ >= problem_->max_iter) {
    done_ = true;
    termination_ = Termination::max_iter;
  }
}

bool FixedPointIteration::step() {
  if (done_) return true;
  std::swap(current_, next_);
  ++k_;
  evaluate();
  return done_;
}

SolveReport FixedPointIteration::report() && {
  SolveReport r{.field = std::move(current_),
                .iterations = k_,
                .termination = termination_,
                .tol = problem_->tol,
                .d_trace = std::move(d_trace_),
                .residual_trace = std::move(residual_trace_),
                .error_estimate = error_estimate_};
  return r;
}

SolveReport solve(const Problem &problem, const SolveOptions &options) {
  return solve_from(problem, build_initial(problem.domain(), problem.boundary, problem.h, problem.extension), options);
}

SolveReport solve_from(const Problem &problem, GridField initial, const SolveOptions &options) {
  const auto start = std::chrono::steady_clock::now();
  FixedPointIteration it(problem, std::move(initial), options.workers);
  if (options.observer) options.observer(0, it.current());
  while (!it.step()) {
    if (options.observer) options.observer(it.k(), it.current());
  }
  if (options.observer && it.k() > 0) options.observer(it.k(), it.current());
  SolveReport report = std::move(it).report();
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double residual(const GridField &field, const OperatorSpec &spec, int workers) {
  return SweepPlan(spec, field).residual(field, workers);
}

GridField damped_initial(const Problem &problem) {
  GridField field = build_initial(problem.domain(), problem.boundary, problem.h, problem.extension);
  double sum = 0.0;
  std::size_t count = 0;
  double depth = 0.0;
  std::vector<double> dist(field.size(), 0.0);
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    if (field.kind(idx) == NodeKind::pinned) {
      sum += field[idx];
      ++count;
    } else {
      dist[idx] = problem.domain().dist_to_boundary(field.node(idx));
      depth = std::max(depth, dist[idx]);
    }
  }
  const double mean = sum / static_cast<double>(count);
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    if (field.kind(idx) == NodeKind::interior) {
      const double keep = 1.0 - dist[idx] / depth;
      field[idx] = mean + keep * (field[idx] - mean);
    }
  }
  return field;
}

double uniqueness_probe(const Problem &problem, const std::vector<GridField> &initial_fields, const SolveOptions &options) {
  if (initial_fields.size() < 2) throw InvalidArgument("uniqueness_probe: need at least two initial fields");
  std::vector<GridField> results;
  results.reserve(initial_fields.size());
  for (const auto &init : initial_fields) results.push_back(solve_from(problem, init, options).field);
  double worst = 0.0;
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) worst = std::max(worst, sup_norm_diff(results[a], results[b]));
  }
  return worst;
}

nlohmann::json to_json(const SolveReport &report) {
  return {{"iterations", report.iterations},
          {"termination", to_string(report.termination)},
          {"tol", report.tol},
          {"error_estimate", report.error_estimate},
          {"residual_trace", report.residual_trace},
          {"d_k_trace", report.d_trace},
          {"wall_ms", report.wall_ms}};
}

} // namespace meanfix
