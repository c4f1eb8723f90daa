#include "meanfix_cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "meanfix/analysis.hpp"
#include "meanfix/error.hpp"
#include "meanfix/parallel.hpp"
#include "meanfix/radius.hpp"

namespace meanfix::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path output_path(const GlobalOptions &opts, const std::string &name) {
  fs::create_directories(opts.out_dir);
  return fs::path(opts.out_dir) / name;
}

void write_json(const fs::path &path, const json &j) {
  std::ofstream os(path);
  if (!os) throw Error(fmt::format("cannot write '{}'", path.string()));
  os << j.dump(2) << '\n';
  spdlog::info("wrote {}", path.string());
}

json params_json(const RadiusParams &p) {
  return {{"alpha", p.alpha}, {"epsilon", p.epsilon}, {"beta", p.beta}, {"lambda", p.lambda}};
}

std::uint64_t seed_of(const RunConfig &c, const GlobalOptions &opts) { return opts.seed.value_or(c.seed); }

BoundaryData upper_boundary(const RunConfig &c) {
  if (c.upper) return boundary_from_string(*c.upper);
  BoundaryData f = boundary_from_string(c.boundary);
  return {f.name() + " + 0.1*(1 + cos(theta))",
          [f](const Point2 &p, double theta) { return f(p, theta) + 0.1 * (1.0 + std::cos(theta)); }};
}

json check_document(const std::string &suite, std::uint64_t seed, const json &verdicts, bool ok) {
  return {{"suite", suite}, {"seed", seed}, {"status", ok ? "pass" : "fail"}, {"verdicts", verdicts}};
}

} // namespace

int cmd_solve(const RunConfig &config, const GlobalOptions &opts, std::ostream &out) {
  const Problem problem = make_problem(config);
  spdlog::info("solving on {} with h = {}, alpha = {}, boundary '{}'", problem.domain().kind(), problem.h,
               problem.spec.params.alpha, problem.boundary.name());
  SolveOptions so;
  so.workers = opts.workers;
  so.observer = [](int k, const GridField &) {
    if (k % 500 == 0) spdlog::debug("iteration {}", k);
  };
  const SolveReport report = solve(problem, so);

  {
    const fs::path csv = output_path(opts, config.field_path);
    std::ofstream os(csv);
    if (!os) throw Error(fmt::format("cannot write '{}'", csv.string()));
    write_csv(report.field, os);
    spdlog::info("wrote {}", csv.string());
  }
  write_json(output_path(opts, config.lattice_path), lattice_metadata(report.field));
  write_json(output_path(opts, config.solve_path), {{"config", to_json(config)},
                                                    {"alpha", problem.spec.params.alpha},
                                                    {"params", params_json(problem.spec.params)},
                                                    {"boundary", problem.boundary.name()},
                                                    {"lattice", lattice_metadata(report.field)},
                                                    {"report", to_json(report)}});

  const double res = report.residual_trace.empty() ? 0.0 : report.residual_trace.back();
  out << fmt::format("{} after {} iterations (residual {:.3e}, error estimate {:.3e})\n", to_string(report.termination),
                     report.iterations, res, report.error_estimate);
  return report.termination == Termination::converged ? kExitOk : kExitMaxIter;
}

int cmd_validate(const RunConfig &config, std::ostream &out) {
  const RadiusParams p = config.params();
  const auto violations = validate_params(p, config.domain);
  json doc;
  doc["params"] = params_json(p);
  // Bounds are reported where they are defined; the violations say why not.
  const auto guarded = [](auto fn) -> json {
    try {
      return fn();
    } catch (const InvalidArgument &) {
      return nullptr;
    }
  };
  doc["beta_max"] = guarded([&]() -> json {
    const auto b = beta_max(p.alpha, p.epsilon);
    return b ? json(*b) : json("unbounded");
  });
  doc["lambda_max"] = guarded([&]() -> json { return lambda_max(config.domain, p.epsilon, p.beta); });
  json list = json::array();
  for (const auto &v : violations) {
    list.push_back({{"constraint", to_string(v.constraint)}, {"value", v.value}, {"bound", v.bound}, {"message", v.message}});
  }
  doc["violations"] = list;
  doc["verdict"] = violations.empty() ? "ok" : "invalid";
  out << doc.dump(2) << '\n';
  return violations.empty() ? kExitOk : kExitError;
}

int cmd_check(const RunConfig &config, const std::string &suite, const GlobalOptions &opts, std::ostream &out) {
  const std::uint64_t seed = seed_of(config, opts);
  const Problem problem = make_problem(config);
  json verdicts = json::array();
  bool ok = true;

  if (suite == "comparison") {
    const auto v = check_comparison(problem, problem.boundary, upper_boundary(config), opts.workers);
    verdicts.push_back(to_json(v));
    ok = v.status != Status::fail;
  } else if (suite == "hull") {
    FixedPointIteration it(problem, build_initial(problem.domain(), problem.boundary, problem.h, problem.extension),
                           opts.workers);
    for (int k : {0, 5, 20}) {
      while (it.k() < k && !it.done()) it.step();
      if (it.k() != k) break;
      json h = to_json(check_graph_hull(it.current(), problem.spec, static_cast<std::size_t>(config.hull_samples), seed, opts.workers));
      json a = to_json(check_value_axis(it.current(), problem.spec, opts.workers));
      ok = ok && h["status"] == "pass" && a["status"] == "pass";
      h["iterate"] = k;
      a["iterate"] = k;
      verdicts.push_back(h);
      verdicts.push_back(a);
    }
  } else if (suite == "regularity") {
    const SolveReport report = solve(problem, {.workers = opts.workers, .observer = {}});
    const auto v = check_regularity(report);
    json j = to_json(v);
    j["iterations"] = report.iterations;
    j["termination"] = to_string(report.termination);
    verdicts.push_back(j);
    ok = v.pass();
  } else if (suite == "operators") {
    const auto v = check_operator_properties(problem.spec, problem.h, config.operator_pairs, seed, opts.workers);
    verdicts.push_back(to_json(v));
    ok = v.pass();
  } else {
    throw InvalidArgument(fmt::format("unknown check suite '{}' (expected comparison|hull|regularity|operators)", suite));
  }

  const json doc = check_document(suite, seed, verdicts, ok);
  write_json(output_path(opts, fmt::format("check_{}.json", suite)), doc);
  out << doc.dump(2) << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_report(const RunConfig &config, const GlobalOptions &opts, std::ostream &out) {
  const Problem problem = make_problem(config);
  const SolveReport report = solve(problem, {.workers = opts.workers, .observer = {}});
  const ModulusReport modulus =
      equicontinuity_report(problem, config.report_n, config.report_k_max, config.report_t_grid, config.report_iteration, opts.workers);
  const json doc = {{"config", to_json(config)},
                    {"alpha", problem.spec.params.alpha},
                    {"solve", to_json(report)},
                    {"regularity", to_json(check_regularity(report))},
                    {"equicontinuity", to_json(modulus)}};
  write_json(output_path(opts, config.report_path), doc);
  out << fmt::format("{} after {} iterations; modulus fit a = {:.4g}, b = {:.4g}, max error {:.3g}\n",
                     to_string(report.termination), report.iterations, modulus.a_fit, modulus.b_fit, modulus.fit_error);
  return kExitOk;
}

int run(int argc, char **argv) {
  auto logger = spdlog::get("meanfix");
  if (!logger) logger = spdlog::stderr_color_mt("meanfix");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char *lvl = std::getenv("MEANFIX_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));

  CLI::App app{"Fixed points of mean value operators on convex planar domains"};
  app.require_subcommand(1);
  std::string config_path;
  GlobalOptions opts;
  opts.workers = default_workers();
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  auto *seed_opt = app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--workers", opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out_dir, "Output directory");

  auto *solve_cmd = app.add_subcommand("solve", "Solve the Dirichlet problem and write the field");
  auto *validate_cmd = app.add_subcommand("validate-params", "Check the radius parameters");
  auto *check_cmd = app.add_subcommand("check", "Run a property suite");
  std::string suite;
  check_cmd->add_option("suite", suite, "comparison | hull | regularity | operators")
      ->required()
      ->check(CLI::IsMember({"comparison", "hull", "regularity", "operators"}));
  auto *report_cmd = app.add_subcommand("report", "Convergence and equicontinuity traces");
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  if (*seed_opt) opts.seed = seed;

  try {
    const RunConfig config = load_config(config_path);
    if (*solve_cmd) return cmd_solve(config, opts, std::cout);
    if (*validate_cmd) return cmd_validate(config, std::cout);
    if (*check_cmd) return cmd_check(config, suite, opts, std::cout);
    if (*report_cmd) return cmd_report(config, opts, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

} // namespace meanfix::cli
