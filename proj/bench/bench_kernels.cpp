// Compares the production (OpenMP-parallel) gate kernels against the serial
// reference implementation on single- and two-qubit gates at several register
// widths. Build requires Google Benchmark (see README).
#include <benchmark/benchmark.h>

#include <vector>

#include "qfs/gates.hpp"
#include "qfs/rng.hpp"
#include "qfs/state_vector.hpp"

namespace {

std::vector<qfs::cplx> random_state(int num_qubits, std::uint64_t seed) {
  qfs::Rng rng(seed);
  std::vector<qfs::cplx> amps(std::size_t{1} << num_qubits);
  double norm = 0.0;
  for (qfs::cplx& a : amps) {
    a = qfs::cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (qfs::cplx& a : amps) a /= norm;
  return amps;
}

template <typename ApplyFn>
void run_single_qubit(benchmark::State& state, ApplyFn apply) {
  const int n = static_cast<int>(state.range(0));
  const qfs::GateMatrix h = qfs::standard_gate("h");
  std::vector<qfs::cplx> amps = random_state(n, 42);
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) apply(amps, n, h, {}, 0, {q});
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * n *
                          static_cast<std::int64_t>(amps.size()));
}

template <typename ApplyFn>
void run_controlled(benchmark::State& state, ApplyFn apply) {
  const int n = static_cast<int>(state.range(0));
  const qfs::GateMatrix x = qfs::standard_gate("x");
  std::vector<qfs::cplx> amps = random_state(n, 43);
  for (auto _ : state) {
    for (int q = 1; q < n; ++q) apply(amps, n, x, {0}, 1, {q});
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1) *
                          static_cast<std::int64_t>(amps.size()));
}

void BM_ParallelSingleQubit(benchmark::State& state) {
  run_single_qubit(state, qfs::kernels::apply);
}

void BM_ReferenceSingleQubit(benchmark::State& state) {
  run_single_qubit(state, qfs::reference::apply);
}

void BM_ParallelControlled(benchmark::State& state) {
  run_controlled(state, qfs::kernels::apply);
}

void BM_ReferenceControlled(benchmark::State& state) {
  run_controlled(state, qfs::reference::apply);
}

}  // namespace

BENCHMARK(BM_ParallelSingleQubit)->DenseRange(10, 20, 5);
BENCHMARK(BM_ReferenceSingleQubit)->DenseRange(10, 20, 5);
BENCHMARK(BM_ParallelControlled)->DenseRange(10, 20, 5);
BENCHMARK(BM_ReferenceControlled)->DenseRange(10, 20, 5);

BENCHMARK_MAIN();
