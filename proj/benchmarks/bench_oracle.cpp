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

#include "ecba/oracle.hpp"

namespace {

using namespace ecba;

void BM_GroundState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = chain_terms(sample_couplings(n, 2.0, 3));
  OracleOptions opt;
  opt.keep_state = false;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, opt));
}
BENCHMARK(BM_GroundState)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
