#include <benchmark/benchmark.h>

#include "chemo/bounds.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/transport.hpp"

namespace {

chemo::Field bump_field(const chemo::DomainSpec& dom) {
  chemo::InitialData init;
  init.kind = chemo::InitialData::Kind::GaussianBump;
  init.bumps = {chemo::Bump{{0.5, 0.5}, 0.1, 10.0}};
  return chemo::build_initial_data(init, dom).u;
}

void BM_Helmholtz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const chemo::DomainSpec dom{{1.0, 1.0}, {n, n}};
  chemo::HelmholtzSolver solver(dom);
  const chemo::Field src = bump_field(dom);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(src, 1.0));
  state.SetItemsProcessed(state.iterations() * dom.size());
}
BENCHMARK(BM_Helmholtz)->Arg(64)->Arg(128)->Arg(256);

void BM_Laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const chemo::DomainSpec dom{{1.0, 1.0}, {n, n}};
  const chemo::Field f = bump_field(dom);
  for (auto _ : state) benchmark::DoNotOptimize(chemo::neumann_laplacian_apply(f));
  state.SetItemsProcessed(state.iterations() * dom.size());
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const chemo::DomainSpec dom{{1.0, 1.0}, {n, n}};
  chemo::StepperConfig cfg;
  cfg.scheme = state.range(1) ? chemo::Scheme::ImexDiffusion : chemo::Scheme::ExplicitUpwind;
  chemo::Stepper stepper(dom, chemo::ModelParams{}, cfg);
  const chemo::SimState s0 = stepper.initial_state(bump_field(dom));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.advance(s0, 1e-6));
  state.SetItemsProcessed(state.iterations() * dom.size());
}
BENCHMARK(BM_Step)->ArgsProduct({{64, 128, 256}, {0, 1}});

void BM_EstimateCgn(benchmark::State& state) {
  const chemo::DomainSpec dom{{1.0, 1.0}, {64, 64}};
  for (auto _ : state) benchmark::DoNotOptimize(chemo::estimate_cgn(dom, 1.5, 2));
}
BENCHMARK(BM_EstimateCgn);

}  // namespace
BENCHMARK_MAIN();
