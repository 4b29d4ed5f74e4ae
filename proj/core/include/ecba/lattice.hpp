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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecba/disorder.hpp"

namespace ecba {

/// Undirected coupler graph of a device. Node ids are arbitrary
/// non-negative integers; edges are stored with first < second.
class Topology {
 public:
  Topology() = default;
  Topology(std::string name, std::vector<int> nodes, std::vector<SitePair> edges);

  const std::string& name() const { return name_; }
  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<SitePair>& edges() const { return edges_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Dense index of a node id, or -1.
  int index_of(int node) const;
  bool adjacent(int a, int b) const;
  /// Neighbours by dense index.
  const std::vector<int>& neighbours(int index) const { return adj_[index]; }
  int max_degree() const;
  /// All-pairs hop distance by dense index; unreachable pairs hold size().
  const std::vector<std::vector<int>>& distances() const { return dist_; }

 private:
  std::string name_;
  std::vector<int> nodes_;
  std::vector<SitePair> edges_;
  std::vector<int> index_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> dist_;
};

/// width x height square lattice; node id = row * width + column.
Topology grid_topology(int width, int height, std::string name = "");

// Text format: a "layout <name>" header, "node <id>" lines, then
// "edge <a> <b>" lines. '#' starts a comment.
Topology read_topology(std::istream& in);
Topology load_topology(const std::string& path);
void write_topology(std::ostream& out, const Topology& topo);

/// assignment[logical site] = physical node id.
struct EmbeddingMap {
  std::vector<int> assignment;

  friend bool operator==(const EmbeddingMap&, const EmbeddingMap&) = default;
};

void write_embedding(std::ostream& out, const EmbeddingMap& map);
EmbeddingMap read_embedding(std::istream& in);

enum class EmbedStatus { Found, Infeasible, Timeout };
const char* status_name(EmbedStatus s);

struct EmbedResult {
  EmbedStatus status = EmbedStatus::Infeasible;
  EmbeddingMap map;
  double seconds = 0.0;
  std::uint64_t nodes_visited = 0;
};

/// Unit embedding of the logical graph on `num_sites` sites by backtracking.
/// Infeasible means the search space was exhausted or a counting bound
/// rules the instance out; Timeout means the budget ran out first.
EmbedResult embed(int num_sites, const std::vector<SitePair>& graph, const Topology& topo,
                  double time_budget_seconds = 1.0);

/// Every problem with the map: range, injectivity and unmapped edges.
/// Empty when the map is a valid unit embedding.
std::vector<std::string> validate(const EmbeddingMap& map, const std::vector<SitePair>& graph,
                                  const Topology& topo);

enum class EmbedMode {
  EcbaEdges,        // RG pairs and the added nearest-neighbour bonds
  AllNearestNeighbour  // full chain plus the long-range RG pairs
};
const char* mode_name(EmbedMode m);
EmbedMode parse_mode(const std::string& s);

/// Logical graph of one realization under the given mode.
std::vector<SitePair> embedding_graph(const CouplingRealization& real, EmbedMode mode);

struct FeasibilityInstance {
  std::uint64_t seed = 0;
  EmbedStatus status = EmbedStatus::Infeasible;
  double seconds = 0.0;
};

struct FeasibilityReport {
  int n = 0;
  double delta = 0.0;
  EmbedMode mode = EmbedMode::AllNearestNeighbour;
  std::string topology;
  int found = 0;
  int infeasible = 0;
  int timeout = 0;
  std::vector<FeasibilityInstance> instances;

  int samples() const { return static_cast<int>(instances.size()); }
  /// Percentile of per-instance wall time, q in [0, 1].
  double time_percentile(double q) const;
};

FeasibilityReport feasibility_study(int n, double delta, int num_samples, const Topology& topo,
                                    std::uint64_t seed,
                                    EmbedMode mode = EmbedMode::AllNearestNeighbour,
                                    double time_budget_seconds = 1.0);

/// Summary row: n,delta,mode,topology,samples,found,infeasible,timeout,p50,p90,p99,max.
void write_feasibility_csv(std::ostream& out, const FeasibilityReport& report, bool header = true);

}  // namespace ecba
