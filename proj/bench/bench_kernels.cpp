// Serial reference vs OpenMP kernels on the hot paths.

#include <benchmark/benchmark.h>

#include "dfrep/ils.hpp"
#include "dfrep/kernels.hpp"
#include "dfrep/probes.hpp"

using namespace dfrep;

namespace {

struct KronInputs {
  Matrix p, q, x;
};

KronInputs kron_inputs(Index n) {
  Rng rng(static_cast<std::uint64_t>(n));
  return {linalg::gaussian_matrix(n, n, rng), linalg::gaussian_matrix(n, n, rng), linalg::gaussian_matrix(n * n, n * n, rng)};
}

void BM_KronTraceSerial(benchmark::State& state) {
  const auto in = kron_inputs(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::kron_trace(in.p, in.q, in.x));
}

void BM_KronTraceParallel(benchmark::State& state) {
  const auto in = kron_inputs(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::kron_trace(in.p, in.q, in.x));
}

void BM_RepresenterSerial(benchmark::State& state) {
  Rng rng(1);
  const auto d = DecoherenceFunctional::pure_state(linalg::random_unit_vector(state.range(0), rng));
  for (auto _ : state) benchmark::DoNotOptimize(ils::assemble_representer(d, false));
}

void BM_RepresenterParallel(benchmark::State& state) {
  Rng rng(1);
  const auto d = DecoherenceFunctional::pure_state(linalg::random_unit_vector(state.range(0), rng));
  for (auto _ : state) benchmark::DoNotOptimize(ils::assemble_representer(d, true));
}

void BM_TracialProbeSerial(benchmark::State& state) {
  Rng rng(2);
  const Matrix x = ils::assemble_representer(DecoherenceFunctional::pure_state(linalg::random_unit_vector(state.range(0), rng)));
  for (auto _ : state) benchmark::DoNotOptimize(probes::tracial_bound_from_representer(x, 2000, 3, false).sup);
}

void BM_TracialProbeParallel(benchmark::State& state) {
  Rng rng(2);
  const Matrix x = ils::assemble_representer(DecoherenceFunctional::pure_state(linalg::random_unit_vector(state.range(0), rng)));
  for (auto _ : state) benchmark::DoNotOptimize(probes::tracial_bound_from_representer(x, 2000, 3, true).sup);
}

}  // namespace

BENCHMARK(BM_KronTraceSerial)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_KronTraceParallel)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_RepresenterSerial)->Arg(3)->Arg(5)->Arg(8);
BENCHMARK(BM_RepresenterParallel)->Arg(3)->Arg(5)->Arg(8);
BENCHMARK(BM_TracialProbeSerial)->Arg(4)->Arg(8);
BENCHMARK(BM_TracialProbeParallel)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
