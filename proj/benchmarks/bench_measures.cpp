#include <benchmark/benchmark.h>

#include <array>

#include "macrocoh/bosonic.hpp"
#include "macrocoh/dynamics.hpp"
#include "macrocoh/experiments.hpp"
#include "macrocoh/macroscopicity.hpp"
#include "macrocoh/measures.hpp"

namespace macrocoh {
namespace {

// Rank-4 states against a collective Z on log2(dim) qubits.
void BM_Qfi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Observable a = collective_z(n);
  const DensityMatrix rho = random_density(Eigen::Index{1} << n, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qfi(rho, a));
}
BENCHMARK(BM_Qfi)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_SkewInformation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Observable a = collective_z(n);
  const DensityMatrix rho = random_density(Eigen::Index{1} << n, 4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(skew_information(rho, a));
}
BENCHMARK(BM_SkewInformation)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_RelativeEntropyAsymmetry(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Observable a = collective_z(n);
  const DensityMatrix rho = random_density(Eigen::Index{1} << n, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy_asymmetry(rho, a));
}
BENCHMARK(BM_RelativeEntropyAsymmetry)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_NfQubitsGhz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = DensityMatrix::from_pure(ghz_state(n));
  SearchConfig cfg;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(nf_qubits(rho, cfg).value);
}
BENCHMARK(BM_NfQubitsGhz)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_NljClosedForm(benchmark::State& state) {
  const FockSpace fock(1, static_cast<int>(state.range(0)));
  const DensityMatrix rho = DensityMatrix::from_pure(standard_state(StateRecipe::cat({1.5, 0.0}), fock));
  for (auto _ : state) benchmark::DoNotOptimize(nlj_closed_form(rho, fock));
}
BENCHMARK(BM_NljClosedForm)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_NljIntegral(benchmark::State& state) {
  const FockSpace fock(1, 30);
  const DensityMatrix rho = DensityMatrix::from_pure(standard_state(StateRecipe::cat({1.5, 0.0}), fock));
  NljIntegralOptions opts;
  opts.points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nlj_integral(rho, fock, opts).value);
}
BENCHMARK(BM_NljIntegral)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const FockSpace fock(1, static_cast<int>(state.range(0)));
  const DensityMatrix rho = DensityMatrix::from_pure(standard_state(StateRecipe::coherent({1.0, 0.5}), fock));
  const auto gen = isotropic_generator(fock);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho, gen, 0.1, 10).back().purity);
}
BENCHMARK(BM_Evolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ScalingTable(benchmark::State& state) {
  const std::array<int, 1> ns{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(scaling_table(ns).front().qfi_value);
}
BENCHMARK(BM_ScalingTable)->DenseRange(4, 14, 2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace macrocoh

BENCHMARK_MAIN();
