// Microbenchmarks for the hot paths: the Pauli spectrum transform, Clifford
// sampling and synthesis, product-formula stepping, and the symbolic
// fourth-moment trace sums.

#include <benchmark/benchmark.h>

#include "trotkit/clifford.hpp"
#include "trotkit/hamiltonian.hpp"
#include "trotkit/moments.hpp"
#include "trotkit/resources.hpp"
#include "trotkit/stats.hpp"
#include "trotkit/trotter.hpp"

using namespace trotkit;

namespace {

StateVector evolved_state(int n) {
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  return evolve(StateVector::zero_state(n), h, 2.0);
}

}  // namespace

static void BM_PauliSpectrumFast(benchmark::State& state) {
  int n = int(state.range(0));
  StateVector psi = evolved_state(n);
  for (auto _ : state) {
    PauliSpectrum sp = pauli_spectrum(psi);
    benchmark::DoNotOptimize(sp.values.data());
  }
  state.SetComplexityN(1 << (2 * n));
}
BENCHMARK(BM_PauliSpectrumFast)->DenseRange(6, 10)->Complexity();

static void BM_PauliSpectrumNaive(benchmark::State& state) {
  int n = int(state.range(0));
  StateVector psi = evolved_state(n);
  for (auto _ : state) {
    PauliSpectrum sp = pauli_spectrum_naive(psi, 8);
    benchmark::DoNotOptimize(sp.values.data());
  }
}
BENCHMARK(BM_PauliSpectrumNaive)->DenseRange(4, 7);

static void BM_Magic(benchmark::State& state) {
  int n = int(state.range(0));
  StateVector psi = evolved_state(n);
  for (auto _ : state) benchmark::DoNotOptimize(magic(psi));
}
BENCHMARK(BM_Magic)->DenseRange(6, 10);

static void BM_SampleClifford(benchmark::State& state) {
  int n = int(state.range(0));
  Rng rng(1);
  for (auto _ : state) {
    CliffordTableau tab = sample_uniform_clifford(n, rng);
    benchmark::DoNotOptimize(&tab);
  }
}
BENCHMARK(BM_SampleClifford)->DenseRange(2, 12)->RangeMultiplier(2);

static void BM_SynthesizeAndApply(benchmark::State& state) {
  int n = int(state.range(0));
  Rng rng(2);
  StateVector psi = StateVector::zero_state(n);
  for (auto _ : state) {
    CliffordTableau tab = sample_uniform_clifford(n, rng);
    StateVector out = apply_clifford(psi, tab);
    benchmark::DoNotOptimize(out.amplitudes().data());
  }
}
BENCHMARK(BM_SynthesizeAndApply)->DenseRange(4, 10);

static void BM_PfStep(benchmark::State& state) {
  int n = int(state.range(0));
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  ProductFormula pf = ProductFormula::pf2(2);
  Rng rng(3);
  StateVector psi = StateVector::random_haar(n, rng);
  for (auto _ : state) {
    psi = pf_step(psi, h, pf, 0.01);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
}
BENCHMARK(BM_PfStep)->DenseRange(6, 12);

static void BM_ShatSample(benchmark::State& state) {
  int n = int(state.range(0));
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  ExactEvolver ev(h);
  ProductFormula pf = ProductFormula::pf1(2);
  StateVector psi = evolved_state(n);
  Rng rng(4);
  for (auto _ : state) {
    StateVector s = sample_ensemble_state(psi, EnsembleKind::LU, rng);
    benchmark::DoNotOptimize(estimate_s_hat(s, h, pf, 0.01, ev));
  }
}
BENCHMARK(BM_ShatSample)->DenseRange(6, 10);

static void BM_ComputeA(benchmark::State& state) {
  int n = int(state.range(0));
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  PauliOperator e = leading_error_pf1(h);
  PauliOperator edag_e = op_mul(dagger(e), e);
  for (auto _ : state) benchmark::DoNotOptimize(compute_A(edag_e));
}
BENCHMARK(BM_ComputeA)->DenseRange(4, 10);

static void BM_ExactVarianceLU(benchmark::State& state) {
  int n = int(state.range(0));
  HamiltonianSpec h = qimf(n, 0.8090, 0.9045, 1.0);
  PauliOperator e = leading_error_pf1(h);
  PauliOperator edag_e = op_mul(dagger(e), e);
  StateVector psi = evolved_state(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_variance_lu(psi, edag_e));
}
BENCHMARK(BM_ExactVarianceLU)->DenseRange(6, 10);

BENCHMARK_MAIN();
