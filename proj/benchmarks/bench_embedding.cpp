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

#include "ecba/lattice.hpp"
#include "ecba/rng.hpp"

namespace {

using namespace ecba;

void BM_EmbedAllNearestNeighbour(benchmark::State& state) {
  const Topology topo = load_topology(std::string(ECBA_DATA_DIR) + "/topologies/emerald_like_54.txt");
  std::uint64_t k = 0;
  for (auto _ : state) {
    const auto real = sample_couplings(20, 2.0, derive_seed(7, "bench", k++));
    benchmark::DoNotOptimize(embed(20, embedding_graph(real, EmbedMode::AllNearestNeighbour), topo));
  }
}
BENCHMARK(BM_EmbedAllNearestNeighbour)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
