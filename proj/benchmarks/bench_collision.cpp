#include <benchmark/benchmark.h>

#include "fbz/collision.hpp"
#include "fbz/detail/stencil.hpp"
#include "fbz/diagnostics.hpp"
#include "fbz/dynamics.hpp"

namespace {

fbz::SimConfig config(int nv, int nx) {
  fbz::SimConfig c;
  c.grid.Nx = nx;
  c.grid.Nv = nv;
  c.grid.Nomega = 16;
  c.ic.id = "x_modulated_maxwellian";
  c.ic.a = 0.3;
  c.workers = 1;
  return c;
}

void BM_Gain(benchmark::State& state) {
  const auto c = config(static_cast<int>(state.range(0)), 2);
  const auto grid = fbz::build_grid(c.grid);
  const fbz::CollisionOperator op(grid, fbz::build_kernel(c.kernel), 1);
  const auto f = fbz::initial_condition(c.ic, grid);
  for (auto _ : state) benchmark::DoNotOptimize(op.gain(f, f));
  state.SetItemsProcessed(state.iterations() * 2 * op.stencils().stencils().size() * grid.Nv() *
                          grid.Nv());
}
BENCHMARK(BM_Gain)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LossRate(benchmark::State& state) {
  const auto c = config(static_cast<int>(state.range(0)), 2);
  const auto grid = fbz::build_grid(c.grid);
  const fbz::CollisionOperator op(grid, fbz::build_kernel(c.kernel), 1);
  const auto f = fbz::initial_condition(c.ic, grid);
  for (auto _ : state) benchmark::DoNotOptimize(op.loss_rate(f));
}
BENCHMARK(BM_LossRate)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_StencilBuild(benchmark::State& state) {
  const auto c = config(static_cast<int>(state.range(0)), 2);
  const auto grid = fbz::build_grid(c.grid);
  const auto spec = fbz::build_kernel(c.kernel);
  for (auto _ : state) benchmark::DoNotOptimize(fbz::CollisionOperator(grid, spec, 1));
}
BENCHMARK(BM_StencilBuild)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_StrangStep(benchmark::State& state) {
  auto c = config(static_cast<int>(state.range(0)), 4);
  c.mode = fbz::CouplingMode::Fuzzy;
  const auto grid = fbz::build_grid(c.grid);
  const fbz::CollisionOperator op(grid, fbz::build_kernel(c.kernel), 1);
  const auto coupling = fbz::build_coupling(c, grid);
  const auto f = fbz::initial_condition(c.ic, grid);
  for (auto _ : state) benchmark::DoNotOptimize(fbz::strang_step(f, 0.01, coupling, op, 0.5));
}
BENCHMARK(BM_StrangStep)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Dissipation(benchmark::State& state) {
  auto c = config(static_cast<int>(state.range(0)), 4);
  const auto grid = fbz::build_grid(c.grid);
  const fbz::CollisionOperator op(grid, fbz::build_kernel(c.kernel), 1);
  const auto coupling = fbz::build_coupling(c, grid);
  const auto f = fbz::initial_condition(c.ic, grid);
  for (auto _ : state) benchmark::DoNotOptimize(fbz::dissipation(f, coupling, op));
}
BENCHMARK(BM_Dissipation)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
