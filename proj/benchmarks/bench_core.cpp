// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <array>
#include <numbers>
#include <random>
#include <vector>

#include "cssim/mitigation.hpp"
#include "cssim/model.hpp"
#include "cssim/pauli.hpp"
#include "cssim/pipeline.hpp"
#include "cssim/simulator.hpp"
#include "cssim/subspace.hpp"
#include "cssim/symmetry.hpp"
#include "cssim/vqe.hpp"

using namespace cssim;

namespace {

PauliSum kagome() { return build_heisenberg(kagome_cell_edges(), ModelParams::xxx(-1.0, 0.0)); }

AnsatzParams theta_star() {
  constexpr double pi = std::numbers::pi;
  return {pi, pi / 2, pi / 2, pi / 2, -pi / 2, 0.0};
}

void BM_CommutationMatrix(benchmark::State& state) {
  const PauliSum h = kagome();
  for (auto _ : state) benchmark::DoNotOptimize(commutation_matrix(h, h));
}
BENCHMARK(BM_CommutationMatrix);

void BM_KernelBasis(benchmark::State& state) {
  const PauliSum h = kagome();
  for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(h));
}
BENCHMARK(BM_KernelBasis);

void BM_ApproxSymmetryScores(benchmark::State& state) {
  const PauliSum h = kagome();
  for (auto _ : state) benchmark::DoNotOptimize(approx_symmetry_scores(h));
}
BENCHMARK(BM_ApproxSymmetryScores)->Unit(benchmark::kMillisecond);

void BM_KagomeGroundEnergy(benchmark::State& state) {
  const PauliSum h = kagome();
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(h, 1));
}
BENCHMARK(BM_KagomeGroundEnergy)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ProjectSubspace(benchmark::State& state) {
  const PauliSum h = kagome();
  StabilizerSet s;
  s.generators = kernel_basis(h);
  s.sector = std::vector<int>(s.generators.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(project_subspace(h, s));
}
BENCHMARK(BM_ProjectSubspace);

void BM_AnsatzStatevector(benchmark::State& state) {
  const Circuit c = build_ansatz(theta_star(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_statevector(c));
}
BENCHMARK(BM_AnsatzStatevector)->Arg(1)->Arg(4);

void BM_AnsatzDensity(benchmark::State& state) {
  const Circuit c = build_ansatz(theta_star(), static_cast<int>(state.range(0)));
  const NoiseModel noise = NoiseModel::surrogate(5);
  for (auto _ : state) benchmark::DoNotOptimize(run_density(c, noise));
}
BENCHMARK(BM_AnsatzDensity)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_ReadoutMitigation(benchmark::State& state) {
  const std::size_t n = 5;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QuasiDistribution q{n, {}};
  for (std::uint64_t b = 0; b < (1U << n); ++b) q.probs[b] = u(rng);
  const ReadoutCalibration mats(n, NoiseModel::flip_confusion(0.02, 0.04));
  for (auto _ : state) benchmark::DoNotOptimize(apply_rem(q, mats));
}
BENCHMARK(BM_ReadoutMitigation);

void BM_ZneFit(benchmark::State& state) {
  const std::array<ZnePoint, 4> pts{
      {{1, -17.59609, 0.07113}, {2, -17.40111, 0.06654}, {3, -17.13956, 0.08612}, {4, -16.88709, 0.10957}}};
  for (auto _ : state) benchmark::DoNotOptimize(zne_fit(pts, true));
}
BENCHMARK(BM_ZneFit)->Unit(benchmark::kMicrosecond);

void BM_MitigatedEnergy(benchmark::State& state) {
  VqeConfig c;
  c.hamiltonian = kagome_cs5_hamiltonian();
  c.noise = NoiseModel::surrogate(5);
  const EnergyEvaluator evaluator(c);
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate(theta_star(), stream++));
}
BENCHMARK(BM_MitigatedEnergy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
