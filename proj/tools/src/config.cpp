#include "meanfix_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "meanfix/error.hpp"
#include "meanfix/expr.hpp"

namespace meanfix::cli {

namespace {

using nlohmann::json;

void check_keys(const json &j, const std::set<std::string> &allowed, const char *where) {
  if (!j.is_object()) throw InvalidArgument(fmt::format("{}: expected an object", where));
  for (const auto &[key, _] : j.items()) {
    if (!allowed.contains(key)) throw InvalidArgument(fmt::format("{}: unknown key '{}'", where, key));
  }
}

template <class T>
T get(const json &j, const char *key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw InvalidArgument(fmt::format("config key '{}': {}", key, e.what()));
  }
}

template <class T>
std::optional<T> get_opt(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

Point2 get_point(const json &j, const char *key) {
  const auto v = get<std::vector<double>>(j, key);
  if (v.size() != 2) throw InvalidArgument(fmt::format("config key '{}': expected [x, y]", key));
  return {v[0], v[1]};
}

Domain domain_from_json(const json &j) {
  const auto type = get<std::string>(j, "type");
  if (type == "disk") {
    check_keys(j, {"type", "center", "radius"}, "domain");
    return Domain::disk(get_point(j, "center"), get<double>(j, "radius"));
  }
  if (type == "ellipse") {
    check_keys(j, {"type", "center", "a", "b"}, "domain");
    return Domain::ellipse(get_point(j, "center"), get<double>(j, "a"), get<double>(j, "b"));
  }
  if (type == "pnorm") {
    check_keys(j, {"type", "center", "radius", "exponent"}, "domain");
    return Domain::pnorm_ball(get_point(j, "center"), get<double>(j, "radius"), get<double>(j, "exponent"));
  }
  throw InvalidArgument(fmt::format("domain: unknown type '{}' (expected disk|ellipse|pnorm)", type));
}

json domain_to_json(const Domain &d) {
  return std::visit(
      [](const auto &s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>) {
          return {{"type", "disk"}, {"center", {s.center.x, s.center.y}}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<S, Ellipse>) {
          return {{"type", "ellipse"}, {"center", {s.center.x, s.center.y}}, {"a", s.a}, {"b", s.b}};
        } else {
          return {{"type", "pnorm"}, {"center", {s.center.x, s.center.y}}, {"radius", s.radius}, {"exponent", s.exponent}};
        }
      },
      d.shape());
}

OperatorKind iteration_from_string(const std::string &s) {
  if (s == "H") return OperatorKind::H;
  if (s == "T") return OperatorKind::T;
  throw InvalidArgument(fmt::format("report.iteration must be H or T, got '{}'", s));
}

template <class T>
json opt_json(const std::optional<T> &v) {
  return v ? json(*v) : json(nullptr);
}

} // namespace

double RunConfig::resolved_alpha() const { return alpha ? *alpha : alpha_from_p(*p, 2); }

double RunConfig::resolved_h() const { return h ? *h : domain.diameter() / *resolution; }

RadiusParams RunConfig::params() const { return make_params(domain, resolved_alpha(), epsilon, beta, lambda); }

int RunConfig::resolved_max_iter() const {
  return max_iter ? *max_iter : default_max_iter(resolved_alpha(), domain.diameter(), resolved_h());
}

RunConfig config_from_json(const json &j) {
  check_keys(j,
             {"domain", "alpha", "p", "epsilon", "beta", "lambda", "h", "resolution", "quadrature", "tol", "max_iter", "boundary",
              "extension", "seed", "output", "checks", "report"},
             "config");
  RunConfig c;
  if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
  c.alpha = get_opt<double>(j, "alpha");
  c.p = get_opt<double>(j, "p");
  if (c.alpha.has_value() == c.p.has_value()) throw InvalidArgument("config: give exactly one of 'alpha' and 'p'");
  c.epsilon = get_opt<double>(j, "epsilon");
  c.beta = get_opt<double>(j, "beta");
  c.lambda = get_opt<double>(j, "lambda");
  c.h = get_opt<double>(j, "h");
  c.resolution = get_opt<int>(j, "resolution");
  if (c.h.has_value() == c.resolution.has_value()) throw InvalidArgument("config: give exactly one of 'h' and 'resolution'");
  if (c.resolution && *c.resolution < 1) throw InvalidArgument("config: resolution must be >= 1");
  if (j.contains("quadrature")) {
    const auto &q = j.at("quadrature");
    check_keys(q, {"n_r", "n_th"}, "quadrature");
    c.n_r = get_opt<int>(q, "n_r").value_or(c.n_r);
    c.n_th = get_opt<int>(q, "n_th").value_or(c.n_th);
  }
  c.tol = get_opt<double>(j, "tol").value_or(c.tol);
  c.max_iter = get_opt<int>(j, "max_iter");
  c.boundary = get_opt<std::string>(j, "boundary").value_or(c.boundary);
  if (j.contains("extension")) c.extension = extension_from_string(get<std::string>(j, "extension"));
  c.seed = get_opt<std::uint64_t>(j, "seed").value_or(0);
  if (j.contains("output")) {
    const auto &o = j.at("output");
    check_keys(o, {"field", "lattice", "solve", "report"}, "output");
    c.field_path = get_opt<std::string>(o, "field").value_or(c.field_path);
    c.lattice_path = get_opt<std::string>(o, "lattice").value_or(c.lattice_path);
    c.solve_path = get_opt<std::string>(o, "solve").value_or(c.solve_path);
    c.report_path = get_opt<std::string>(o, "report").value_or(c.report_path);
  }
  if (j.contains("checks")) {
    const auto &k = j.at("checks");
    check_keys(k, {"operator_pairs", "hull_samples", "upper"}, "checks");
    c.operator_pairs = get_opt<int>(k, "operator_pairs").value_or(c.operator_pairs);
    c.hull_samples = get_opt<int>(k, "hull_samples").value_or(c.hull_samples);
    c.upper = get_opt<std::string>(k, "upper");
  }
  if (j.contains("report")) {
    const auto &r = j.at("report");
    check_keys(r, {"n", "k_max", "t_grid", "iteration"}, "report");
    c.report_n = get_opt<int>(r, "n").value_or(c.report_n);
    c.report_k_max = get_opt<int>(r, "k_max").value_or(c.report_k_max);
    c.report_t_grid = get_opt<std::vector<double>>(r, "t_grid").value_or(c.report_t_grid);
    if (r.contains("iteration")) c.report_iteration = iteration_from_string(get<std::string>(r, "iteration"));
  }
  // Surface a bad boundary string at load time.
  boundary_from_string(c.boundary);
  if (c.upper) boundary_from_string(*c.upper);
  return c;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open config '{}'", path));
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error &e) {
    throw InvalidArgument(fmt::format("config '{}': {}", path, e.what()));
  }
  return config_from_json(j);
}

json to_json(const RunConfig &c) {
  return {{"domain", domain_to_json(c.domain)},
          {"alpha", opt_json(c.alpha)},
          {"p", opt_json(c.p)},
          {"epsilon", opt_json(c.epsilon)},
          {"beta", opt_json(c.beta)},
          {"lambda", opt_json(c.lambda)},
          {"h", opt_json(c.h)},
          {"resolution", opt_json(c.resolution)},
          {"quadrature", {{"n_r", c.n_r}, {"n_th", c.n_th}}},
          {"tol", c.tol},
          {"max_iter", opt_json(c.max_iter)},
          {"boundary", c.boundary},
          {"extension", to_string(c.extension)},
          {"seed", c.seed},
          {"output", {{"field", c.field_path}, {"lattice", c.lattice_path}, {"solve", c.solve_path}, {"report", c.report_path}}},
          {"checks", {{"operator_pairs", c.operator_pairs}, {"hull_samples", c.hull_samples}, {"upper", opt_json(c.upper)}}},
          {"report",
           {{"n", c.report_n}, {"k_max", c.report_k_max}, {"t_grid", c.report_t_grid}, {"iteration", to_string(c.report_iteration)}}}};
}

BoundaryData boundary_from_string(const std::string &text) {
  static const std::string num = R"(\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*)";
  static const std::regex affine_re("^\\s*affine\\(" + num + "," + num + "," + num + "\\)\\s*$");
  static const std::regex cosk_re("^\\s*cosk(?:theta|θ)\\(" + num + "\\)\\s*$");
  std::smatch m;
  if (std::regex_match(text, m, affine_re)) {
    return BoundaryData::affine(std::stod(m[1]), std::stod(m[2]), std::stod(m[3]));
  }
  if (std::regex_match(text, m, cosk_re)) return BoundaryData::cos_k_theta(std::stod(m[1]));
  if (std::regex_match(text, std::regex("^\\s*harmonic2\\s*$"))) return BoundaryData::harmonic2();

  Expr e = [&] {
    try {
      return Expr::parse(text);
    } catch (const ParseError &err) {
      throw InvalidArgument(fmt::format("boundary '{}': {}", text, err.what()));
    }
  }();
  return {e.print(), [e](const Point2 &p, double theta) {
            try {
              return e.eval({p.x, p.y, theta});
            } catch (const EvalError &) {
              return std::nan("");
            }
          }};
}

OperatorSpec make_spec(const RunConfig &c) { return OperatorSpec(c.domain, c.params(), BallRule(c.n_r, c.n_th)); }

Problem make_problem(const RunConfig &c) {
  return Problem(make_spec(c), boundary_from_string(c.boundary), c.resolved_h(), c.tol, c.resolved_max_iter(), c.extension);
}

} // namespace meanfix::cli
