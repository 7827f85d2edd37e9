#include <benchmark/benchmark.h>

#include "quasiform/classical.hpp"
#include "quasiform/zeta.hpp"

using namespace qf;

namespace {

SchottkyData surface() {
  SchottkyData s;
  s.handles.push_back(derive_handle({1.0, 0.2}, {-1.0, 0.1}, {0.02, 0.0}));
  s.handles.push_back(derive_handle({0.1, 1.5}, {-0.2, -1.4}, {0.0, 0.02}));
  return s;
}

void BM_Assemble(benchmark::State& state) {
  const SchottkyData s = surface();
  const int N = static_cast<int>(state.range(0));
  const int M = static_cast<int>(state.range(1));
  const KernelConfig cfg = default_kernel(s, N);
  for (auto _ : state) benchmark::DoNotOptimize(QuasiformEngine::assemble(s, cfg, M));
}
BENCHMARK(BM_Assemble)->Args({1, 16})->Args({1, 32})->Args({2, 16})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_PsiEval(benchmark::State& state) {
  const SchottkyData s = surface();
  const QuasiformEngine e = QuasiformEngine::assemble(s, default_kernel(s, 2), static_cast<int>(state.range(0)));
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(e.psi_coeff(x, y));
}
BENCHMARK(BM_PsiEval)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_LogdetTruncated(benchmark::State& state) {
  const SchottkyData s = surface();
  const QuasiformEngine e = QuasiformEngine::assemble(s, default_kernel(s, 1), 20);
  for (auto _ : state) benchmark::DoNotOptimize(logdet_truncated(e));
}
BENCHMARK(BM_LogdetTruncated)->Unit(benchmark::kMillisecond);

void BM_LogdetProduct(benchmark::State& state) {
  const SchottkyData s = surface();
  const int len = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(logdet_product(s, 1, len));
}
BENCHMARK(BM_LogdetProduct)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PeriodMatrix(benchmark::State& state) {
  const SchottkyData s = surface();
  const QuasiformEngine e = QuasiformEngine::assemble(s, default_kernel(s, 1), 32);
  for (auto _ : state) benchmark::DoNotOptimize(period_matrix(e));
}
BENCHMARK(BM_PeriodMatrix)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
