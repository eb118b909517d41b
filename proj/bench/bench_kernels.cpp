// Serial reference kernels against the OpenMP versions on oracle-sized grids.
#include <benchmark/benchmark.h>

#include "semiquant/kernels.hpp"
#include "semiquant/spectrum.hpp"

using namespace semiquant;
using namespace semiquant::kernels;

namespace {

const PotentialModel& model() {
  static const PotentialModel m = perturbed_sturmian(60.0, 2.0, 1.0, 0.1);
  return m;
}

Grid grid(benchmark::State& state) { return {-30.0, 30.0, static_cast<int>(state.range(0)), Boundary::Dirichlet}; }

void BM_AssembleSerial(benchmark::State& state) {
  const Grid g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(serial::assemble(model(), 1.0, g));
}

void BM_AssembleParallel(benchmark::State& state) {
  const Grid g = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(model(), 1.0, g));
}

void BM_EigenvaluesSerial(benchmark::State& state) {
  const auto t = serial::assemble(model(), 1.0, grid(state));
  for (auto _ : state) benchmark::DoNotOptimize(serial::lowest_eigenvalues(t, 16));
}

void BM_EigenvaluesParallel(benchmark::State& state) {
  const auto t = serial::assemble(model(), 1.0, grid(state));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(t, 16));
}

void BM_ClassExactSpectrum(benchmark::State& state) {
  const auto m = sturmian_family(60.0, 2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(m, QuantizationMode::class_exact(), 1.0));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssembleParallel)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EigenvaluesSerial)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenvaluesParallel)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassExactSpectrum)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
