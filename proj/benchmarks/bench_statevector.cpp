// Copyright 2026 The ECBA Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "ecba/circuit.hpp"
#include "ecba/rng.hpp"
#include "ecba/statevector.hpp"

namespace {

using namespace ecba;

void BM_RotationGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  QuantumState s(n);
  const Gate g{GateKind::RY, n / 2, -1, 0};
  const std::vector<double> p = {0.3};
  for (auto _ : state) {
    apply_gate(s, g, p);
    benchmark::DoNotOptimize(s[0]);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_RotationGate)->DenseRange(12, 20, 4);

void BM_Cz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  QuantumState s(n);
  for (auto _ : state) {
    apply_cz(s, 0, n - 1);
    benchmark::DoNotOptimize(s[0]);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_Cz)->DenseRange(12, 20, 4);

void BM_EcbaCircuit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Circuit c = decompose(build_ecba(make_plan(sample_couplings(n, 8.0, 1))));
  std::vector<double> p(c.num_params, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(run(c, p));
}
BENCHMARK(BM_EcbaCircuit)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
