#include <benchmark/benchmark.h>

#include <cmath>

#include "schouten/cone.hpp"
#include "schouten/solver.hpp"

using namespace schouten;

namespace {

double u_star(double r) { return std::log(2.0 / (1.0 - r * r)); }

SolverConfig ball_cfg(int n, int k, double tau, int intervals) {
  SolverConfig cfg;
  cfg.cone = make_cone(n, k, tau);
  cfg.geometry = RadialGeometry::flat(n, 0.0, 0.9);
  cfg.grid = make_uniform_grid(cfg.geometry, intervals, GridKind::Ball);
  cfg.boundary_hi = u_star(0.9);
  return cfg;
}

ConformalFactor exact_state(const SolverConfig& cfg) {
  ConformalFactor u;
  u.grid = cfg.grid;
  u.values.resize(cfg.grid.nodes.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = u_star(cfg.grid.nodes[i]);
  return u;
}

void BM_FValue(benchmark::State& state) {
  const ConeSpec cone = make_cone(static_cast<int>(state.range(0)), 2, 0.9);
  InteriorSampler sampler(cone, 1);
  const EigVector lam = sampler.next();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_value(lam, cone));
  }
}
BENCHMARK(BM_FValue)->Arg(5)->Arg(9);

void BM_FGradient(benchmark::State& state) {
  const ConeSpec cone = make_cone(static_cast<int>(state.range(0)), 2, 0.9);
  InteriorSampler sampler(cone, 1);
  const EigVector lam = sampler.next();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_gradient(lam, cone));
  }
}
BENCHMARK(BM_FGradient)->Arg(5)->Arg(9);

void BM_MuPlus(benchmark::State& state) {
  const ConeSpec cone = make_cone(7, 3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_plus(cone));
  }
}
BENCHMARK(BM_MuPlus);

void BM_Residual(benchmark::State& state) {
  const SolverConfig cfg = ball_cfg(5, 2, 0.5, static_cast<int>(state.range(0)));
  const ConformalFactor u = exact_state(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual(u, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Residual)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Jacobian(benchmark::State& state) {
  const SolverConfig cfg = ball_cfg(5, 2, 0.5, static_cast<int>(state.range(0)));
  const ConformalFactor u = exact_state(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobian(u, cfg));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Jacobian)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_NewtonSolveBall(benchmark::State& state) {
  const SolverConfig cfg = ball_cfg(3, 1, 0.0, static_cast<int>(state.range(0)));
  const ConformalFactor init = prephase_init(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton_solve(cfg, init));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NewtonSolveBall)->RangeMultiplier(2)->Range(100, 800)->Complexity();

}  // namespace

BENCHMARK_MAIN();
