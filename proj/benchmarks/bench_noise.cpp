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

#include "ecba/noise.hpp"

namespace {

using namespace ecba;

void BM_NoisyShots(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Circuit c = decompose(build_ecba(make_plan(sample_couplings(n, 8.0, 4))));
  std::vector<double> p(c.num_params, 0.05);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(noisy_basis_shots(c, p, NoiseSpec{}, Basis::Z, 10000, seed++));
}
BENCHMARK(BM_NoisyShots)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_Twirl(benchmark::State& state) {
  const Circuit c = decompose(build_ecba(make_plan(sample_couplings(30, 8.0, 4))));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(pauli_twirl(c, seed++));
}
BENCHMARK(BM_Twirl);

}  // namespace

BENCHMARK_MAIN();
