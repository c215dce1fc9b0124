#include <benchmark/benchmark.h>

#include <memory>

#include "felab/assembly.hpp"
#include "felab/bestapprox.hpp"
#include "felab/solutions.hpp"
#include "felab/sparse.hpp"

using namespace felab;

namespace {

std::shared_ptr<const Mesh> tri_mesh(int n) {
  return std::make_shared<Mesh>(build_structured(n, CellKind::Triangle));
}

void BM_BuildStructured(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_structured(n, CellKind::Triangle));
}
BENCHMARK(BM_BuildStructured)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SpaceBuild(benchmark::State& state) {
  const auto mesh = tri_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(FESpace(mesh, Family::MORLEY, 2).num_dofs());
}
BENCHMARK(BM_SpaceBuild)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssemblePoissonP1(benchmark::State& state) {
  const auto mesh = tri_mesh(static_cast<int>(state.range(0)));
  const FESpace space(mesh, Family::P1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_bilinear(space, 1).sum());
}
BENCHMARK(BM_AssemblePoissonP1)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolvePoissonP1(benchmark::State& state) {
  const auto mesh = tri_mesh(static_cast<int>(state.range(0)));
  const FESpace space(mesh, Family::P1, 1);
  const SparseSymmetricMatrix a = assemble_bilinear(space, 1);
  const ManufacturedSolution& u = manufactured("sinsin");
  const FunctionField f([&u](Vec2 p) { return u.f_laplace(p); });
  const std::vector<double> b = assemble_load(space, f);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spd(a, b, 1e-10).x[0]);
}
BENCHMARK(BM_SolvePoissonP1)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BrokenNormCR(benchmark::State& state) {
  const auto mesh = tri_mesh(static_cast<int>(state.range(0)));
  const FESpace space(mesh, Family::CR, 0);
  const ManufacturedSolution& u = manufactured("sinsin");
  const FEFunction v = interpolate(space, u);
  const NormSpec spec = NormSpec::norm(1, NormP::Two);
  for (auto _ : state) benchmark::DoNotOptimize(broken_error(space, u, &v, spec));
}
BENCHMARK(BM_BrokenNormCR)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BestApproxP1(benchmark::State& state) {
  const auto mesh = tri_mesh(static_cast<int>(state.range(0)));
  const FESpace space(mesh, Family::P1, 0);
  const ManufacturedSolution& u = manufactured("sinsin");
  for (auto _ : state) benchmark::DoNotOptimize(best_approx(space, u, 1).distance);
}
BENCHMARK(BM_BestApproxP1)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
