#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanfix/geometry.hpp"
#include "meanfix/gridfield.hpp"
#include "meanfix/operators.hpp"
#include "meanfix/solver.hpp"

namespace meanfix::cli {

/// Everything a run needs, read from one JSON document.
///
///   {
///     "domain": {"type": "disk", "center": [0, 0], "radius": 1},
///     "alpha": 0.0,                     // or "p": 4 (exactly one of the two)
///     "epsilon": 0.5, "beta": 1, "lambda": 0.45,   // optional
///     "h": 0.015625,                    // or "resolution": 128, h = diam / resolution
///     "quadrature": {"n_r": 8, "n_th": 32},
///     "tol": 1e-8, "max_iter": 10000,   // max_iter optional
///     "boundary": "harmonic2",          // builtin or expression in x, y, theta
///     "extension": "natural",
///     "seed": 0,
///     "output": {"field": "field.csv", "lattice": "field.json", "solve": "solve.json", "report": "report.json"},
///     "checks": {"operator_pairs": 100, "hull_samples": 300, "upper": "harmonic2 + 0.1"},
///     "report": {"n": 1, "k_max": 20, "t_grid": [0.05, 0.1, 0.2], "iteration": "H"}
///   }
///
/// Domain types: disk {center, radius}, ellipse {center, a, b},
/// pnorm {center, radius, exponent}.
struct RunConfig {
  Domain domain = Domain::disk({0.0, 0.0}, 1.0);
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> epsilon;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> h;
  std::optional<int> resolution;
  int n_r = 8;
  int n_th = 32;
  double tol = 1e-8;
  std::optional<int> max_iter;
  std::string boundary = "harmonic2";
  Extension extension = Extension::natural;
  std::uint64_t seed = 0;

  std::string field_path = "field.csv";
  std::string lattice_path = "field.json";
  std::string solve_path = "solve.json";
  std::string report_path = "report.json";

  int operator_pairs = 100;
  int hull_samples = 300;
  std::optional<std::string> upper;

  int report_n = 1;
  int report_k_max = 20;
  std::vector<double> report_t_grid{0.05, 0.1, 0.2, 0.4};
  OperatorKind report_iteration = OperatorKind::H;

  /// alpha, or alpha_from_p(p, 2).
  double resolved_alpha() const;
  /// h, or diam / resolution.
  double resolved_h() const;
  RadiusParams params() const;
  int resolved_max_iter() const;
};

/// Throws InvalidArgument on unknown keys, wrong types, both or neither of
/// alpha / p, or both or neither of h / resolution.
RunConfig config_from_json(const nlohmann::json &j);
RunConfig load_config(const std::string &path);

/// Canonical form: every key explicit, keys sorted. config_from_json of the
/// result gives back an equal config.
nlohmann::json to_json(const RunConfig &c);

/// Builtins "affine(a,b,c)", "harmonic2", "cosktheta(k)" (also "coskθ(k)"),
/// otherwise an expression in x, y, theta. Evaluation errors of an
/// expression surface as NaN, so the natural extension falls back to the
/// boundary projection where the expression is undefined.
BoundaryData boundary_from_string(const std::string &text);

/// The spec and problem described by the config; throws InvalidArgument if
/// the parameters are inadmissible.
OperatorSpec make_spec(const RunConfig &c);
Problem make_problem(const RunConfig &c);

} // namespace meanfix::cli
