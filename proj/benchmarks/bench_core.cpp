#include <random>

#include <benchmark/benchmark.h>

#include "meanfix/analysis.hpp"
#include "meanfix/expr.hpp"
#include "meanfix/hull.hpp"
#include "meanfix/operators.hpp"
#include "meanfix/solver.hpp"

using namespace meanfix;

namespace {

const Domain kDisk = Domain::disk({0, 0}, 1);

void BM_SweepH(benchmark::State &state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const OperatorSpec spec(kDisk, make_params(kDisk, 0.5), BallRule(8, 32));
  const GridField u = build_initial(kDisk, BoundaryData::cos_k_theta(3), h);
  const SweepPlan plan(spec, u);
  GridField out = u;
  for (auto _ : state) {
    plan.apply(u, OperatorKind::H, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plan.interior().size()));
}
BENCHMARK(BM_SweepH)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BallRule(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(BallRule(static_cast<int>(state.range(0)), 4 * static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BallRule)->Arg(8)->Arg(16);

void BM_EllipseDistance(benchmark::State &state) {
  const Domain e = Domain::ellipse({0, 0}, 2, 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<Point2> pts(1024);
  for (auto &p : pts) p = {2 * u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(e.dist_to_boundary(pts[i++ & 1023]));
}
BENCHMARK(BM_EllipseDistance);

void BM_PNormDistance(benchmark::State &state) {
  const Domain d = Domain::pnorm_ball({0, 0}, 1, 4);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<Point2> pts(1024);
  for (auto &p : pts) p = {u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.dist_to_boundary(pts[i++ & 1023]));
}
BENCHMARK(BM_PNormDistance);

void BM_Hull(benchmark::State &state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Point3> pts(static_cast<std::size_t>(state.range(0)));
  for (auto &p : pts) p = {g(rng), g(rng), g(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(ConvexHull3(pts).facets().size());
}
BENCHMARK(BM_Hull)->Arg(100)->Arg(300)->Arg(500);

void BM_ExprEval(benchmark::State &state) {
  const Expr e = Expr::parse("x^2 - y^2 + 0.1 * cos(3 * theta) + sqrt(abs(x * y))");
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e(x, 0.3, 0.7));
    x += 1e-9;
  }
}
BENCHMARK(BM_ExprEval);

} // namespace

BENCHMARK_MAIN();
