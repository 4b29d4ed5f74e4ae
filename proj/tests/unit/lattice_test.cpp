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

#include "ecba/lattice.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "ecba/rg_flow.hpp"

namespace ecba {
namespace {

const std::string kDataDir = ECBA_DATA_DIR;

std::vector<SitePair> path_graph(int n) {
  std::vector<SitePair> g;
  for (int i = 0; i + 1 < n; ++i) g.push_back({i, i + 1});
  return g;
}

TEST(TopologyTest, GridStructure) {
  const Topology t = grid_topology(4, 5);
  EXPECT_EQ(t.name(), "grid_4x5");
  EXPECT_EQ(t.size(), 20);
  EXPECT_EQ(t.edges().size(), 31u);
  EXPECT_TRUE(t.adjacent(0, 1));
  EXPECT_TRUE(t.adjacent(0, 4));
  EXPECT_FALSE(t.adjacent(3, 4));
  EXPECT_EQ(t.max_degree(), 4);
  EXPECT_EQ(t.distances()[t.index_of(0)][t.index_of(19)], 7);
  EXPECT_EQ(t.index_of(99), -1);
}

TEST(TopologyTest, RejectsMalformed) {
  EXPECT_THROW(Topology("t", {0, 0}, {}), std::invalid_argument);
  EXPECT_THROW(Topology("t", {0, 1}, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Topology("t", {0, 1}, {{0, 2}}), std::invalid_argument);
  std::istringstream bad("layout x\nnode 0\nbogus 1\n");
  EXPECT_THROW(read_topology(bad), std::runtime_error);
  EXPECT_THROW(load_topology(kDataDir + "/topologies/missing.txt"), std::runtime_error);
}

TEST(TopologyTest, TextRoundTrip) {
  const Topology t = grid_topology(3, 2, "tiny");
  std::stringstream ss;
  write_topology(ss, t);
  const Topology back = read_topology(ss);
  EXPECT_EQ(back.name(), "tiny");
  EXPECT_EQ(back.nodes(), t.nodes());
  EXPECT_EQ(back.edges(), t.edges());
}

TEST(TopologyTest, ShippedLayouts) {
  const Topology g = load_topology(kDataDir + "/topologies/garnet_like_20.txt");
  EXPECT_EQ(g.size(), 20);
  EXPECT_EQ(g.edges().size(), 31u);
  const Topology e = load_topology(kDataDir + "/topologies/emerald_like_54.txt");
  EXPECT_EQ(e.size(), 54);
  EXPECT_EQ(e.edges().size(), 93u);
  EXPECT_EQ(e.max_degree(), 4);
}

TEST(EmbedTest, PathOntoGrid) {
  const Topology t = grid_topology(4, 5);
  for (int n : {2, 5, 12, 20}) {
    const auto g = path_graph(n);
    const auto r = embed(n, g, t);
    ASSERT_EQ(r.status, EmbedStatus::Found) << n;
    EXPECT_TRUE(validate(r.map, g, t).empty());
  }
}

TEST(EmbedTest, RainbowLadderOntoTwentyNodeLayout) {
  std::vector<SitePair> g = path_graph(10);
  for (int i = 0; i < 5; ++i) g.push_back({i, 9 - i});
  const Topology t = load_topology(kDataDir + "/topologies/garnet_like_20.txt");
  const auto r = embed(10, g, t);
  ASSERT_EQ(r.status, EmbedStatus::Found);
  EXPECT_TRUE(validate(r.map, g, t).empty());
}

TEST(EmbedTest, StarIsInfeasibleNotTimeout) {
  const std::vector<SitePair> star = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
  const auto r = embed(6, star, grid_topology(6, 9), 5.0);
  EXPECT_EQ(r.status, EmbedStatus::Infeasible);
  EXPECT_LT(r.seconds, 1.0);
}

TEST(EmbedTest, TriangleIsInfeasibleOnBipartiteGrid) {
  // Ruled out by search, not by degree counting.
  const std::vector<SitePair> tri = {{0, 1}, {1, 2}, {0, 2}};
  EXPECT_EQ(embed(3, tri, grid_topology(3, 3), 5.0).status, EmbedStatus::Infeasible);
}

TEST(EmbedTest, TooManySites) {
  EXPECT_EQ(embed(7, path_graph(7), grid_topology(2, 3)).status, EmbedStatus::Infeasible);
}

TEST(EmbedTest, TwoSitesAlwaysEmbed) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto real = sample_couplings(2, 2.0, s);
    for (auto mode : {EmbedMode::EcbaEdges, EmbedMode::AllNearestNeighbour}) {
      const auto g = embedding_graph(real, mode);
      const auto r = embed(2, g, grid_topology(4, 5));
      ASSERT_EQ(r.status, EmbedStatus::Found);
      EXPECT_TRUE(validate(r.map, g, grid_topology(4, 5)).empty());
    }
  }
}

TEST(ValidateTest, ReportsEveryProblem) {
  const Topology t = grid_topology(3, 3);
  const std::vector<SitePair> g = {{0, 1}, {1, 2}};
  EXPECT_TRUE(validate({{0, 1, 2}}, g, t).empty());
  EXPECT_EQ(validate({{0, 1, 5}}, g, t).size(), 1u);     // 1 and 5 not coupled
  EXPECT_EQ(validate({{0, 0, 1}}, g, t).size(), 2u);     // shared node and 0-0 edge
  EXPECT_FALSE(validate({{0, 1, 42}}, g, t).empty());   // unknown node
}

TEST(EmbeddingGraphTest, Modes) {
  const auto real = sample_couplings(10, 8.0, 3);
  const auto plan = make_plan(real);
  const auto all_nn = embedding_graph(real, EmbedMode::AllNearestNeighbour);
  const auto ecba = embedding_graph(real, EmbedMode::EcbaEdges);
  const auto chain = path_graph(10);
  std::set<SitePair> expect_all(chain.begin(), chain.end());
  for (const auto& p : plan.rg_pairs) expect_all.insert(p);
  EXPECT_EQ(std::set<SitePair>(all_nn.begin(), all_nn.end()), expect_all);
  const auto ig = interaction_graph(plan);
  EXPECT_EQ(std::set<SitePair>(ecba.begin(), ecba.end()), std::set<SitePair>(ig.begin(), ig.end()));
  EXPECT_EQ(parse_mode("ecba"), EmbedMode::EcbaEdges);
  EXPECT_EQ(parse_mode("all-nn"), EmbedMode::AllNearestNeighbour);
  EXPECT_THROW(parse_mode("nope"), std::invalid_argument);
}

TEST(EmbeddingMapTest, RoundTrip) {
  const EmbeddingMap m{{7, 3, 11, 0}};
  std::stringstream ss;
  write_embedding(ss, m);
  EXPECT_EQ(read_embedding(ss), m);
  std::istringstream bad("0 1\n0 2\n");
  EXPECT_THROW(read_embedding(bad), std::runtime_error);
}

TEST(FeasibilityTest, DeterministicAndConsistent) {
  const Topology t = load_topology(kDataDir + "/topologies/emerald_like_54.txt");
  const auto a = feasibility_study(12, 8.0, 40, t, 77);
  const auto b = feasibility_study(12, 8.0, 40, t, 77);
  ASSERT_EQ(a.samples(), 40);
  EXPECT_EQ(a.found + a.infeasible + a.timeout, 40);
  for (int i = 0; i < 40; ++i) {
    EXPECT_EQ(a.instances[i].seed, b.instances[i].seed);
    EXPECT_EQ(a.instances[i].status, b.instances[i].status);
  }
  EXPECT_LE(a.time_percentile(0.5), a.time_percentile(0.99));
  std::ostringstream out;
  write_feasibility_csv(out, a);
  EXPECT_EQ(out.str().rfind("n,delta,mode,topology,samples,found,infeasible,timeout,", 0), 0u);
}

}  // namespace
}  // namespace ecba
