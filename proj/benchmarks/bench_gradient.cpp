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

#include "ecba/vqe.hpp"

namespace {

using namespace ecba;

void BM_AdjointGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto real = sample_couplings(n, 8.0, 2);
  const auto h = chain_terms(real);
  const Circuit c = build_random_chain_ansatz(AnsatzFamily::ECBA, real);
  std::vector<double> p(c.num_params, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(energy_and_gradient(c, p, h));
}
BENCHMARK(BM_AdjointGradient)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void BM_RainbowGradient(benchmark::State& state) {
  const RainbowSpec spec{10, 1.0, 100.0};
  const auto h = rainbow_terms(spec);
  const Circuit c = build_rainbow_cba(spec);
  std::vector<double> p(c.num_params, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(energy_and_gradient(c, p, h));
}
BENCHMARK(BM_RainbowGradient)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
