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
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecba/rg_flow.hpp"
#include "ecba/rng.hpp"

namespace ecba {
namespace {

std::vector<std::vector<int>> bfs_all(const std::vector<std::vector<int>>& adj, int unreachable) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, unreachable));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (dist[s][v] == unreachable) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
    }
  }
  return dist;
}

using Clock = std::chrono::steady_clock;

class Search {
 public:
  Search(int n, const std::vector<SitePair>& graph, const Topology& topo, double budget)
      : n_(n), topo_(topo), ladj_(n), pos_(n, -1), used_(topo.size(), 0),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(budget))) {
    for (const auto& [a, b] : graph) {
      ladj_[a].push_back(b);
      ladj_[b].push_back(a);
    }
    for (auto& v : ladj_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    gdist_ = bfs_all(ladj_, std::numeric_limits<int>::max() / 2);
  }

  // 1 found, 0 exhausted, -1 timed out.
  int run() { return step(0); }
  std::uint64_t visited() const { return visited_; }
  std::vector<int> assignment() const {
    std::vector<int> out(n_);
    for (int v = 0; v < n_; ++v) out[v] = topo_.nodes()[pos_[v]];
    return out;
  }

 private:
  bool admissible(int v, int x) const {
    if (used_[x]) return false;
    const auto& tn = topo_.neighbours(x);
    if (tn.size() < ladj_[v].size()) return false;
    const auto& td = topo_.distances()[x];
    for (int w = 0; w < n_; ++w)
      if (pos_[w] >= 0 && td[pos_[w]] > gdist_[v][w]) return false;
    int free_slots = 0, needed = 0;
    for (int y : tn) free_slots += used_[y] ? 0 : 1;
    for (int u : ladj_[v]) needed += pos_[u] < 0 ? 1 : 0;
    return free_slots >= needed;
  }

  std::vector<int> candidates(int v) const {
    std::vector<int> out;
    int anchor = -1;
    for (int u : ladj_[v])
      if (pos_[u] >= 0) {
        anchor = pos_[u];
        break;
      }
    if (anchor >= 0) {
      for (int x : topo_.neighbours(anchor))
        if (admissible(v, x)) out.push_back(x);
    } else {
      for (int x = 0; x < topo_.size(); ++x)
        if (admissible(v, x)) out.push_back(x);
    }
    return out;
  }

  int step(int placed) {
    if (placed == n_) return 1;
    if ((++visited_ & 255) == 0 && Clock::now() > deadline_) return -1;

    // Most constrained site among those touching the placed set.
    int best = -1;
    std::vector<int> best_cands;
    for (int v = 0; v < n_; ++v) {
      if (pos_[v] >= 0) continue;
      bool anchored = false;
      for (int u : ladj_[v]) anchored = anchored || pos_[u] >= 0;
      if (!anchored) continue;
      auto c = candidates(v);
      if (c.empty()) return 0;
      if (best < 0 || c.size() < best_cands.size() ||
          (c.size() == best_cands.size() && ladj_[v].size() > ladj_[best].size())) {
        best = v;
        best_cands = std::move(c);
      }
    }
    if (best < 0) {
      // New component: start from its highest-degree site.
      for (int v = 0; v < n_; ++v)
        if (pos_[v] < 0 && (best < 0 || ladj_[v].size() > ladj_[best].size())) best = v;
      best_cands = candidates(best);
    }
    if (best_cands.empty()) return 0;

    // Keep the placement compact.
    std::vector<std::pair<int, int>> order;
    for (int x : best_cands) {
      int cost = 0;
      for (int w = 0; w < n_; ++w)
        if (pos_[w] >= 0) cost += topo_.distances()[x][pos_[w]];
      order.emplace_back(cost, x);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [cost, x] : order) {
      pos_[best] = x;
      used_[x] = 1;
      const int r = step(placed + 1);
      if (r != 0) return r;
      pos_[best] = -1;
      used_[x] = 0;
    }
    return 0;
  }

  int n_;
  const Topology& topo_;
  std::vector<std::vector<int>> ladj_;
  std::vector<std::vector<int>> gdist_;
  std::vector<int> pos_;
  std::vector<char> used_;
  Clock::time_point deadline_;
  std::uint64_t visited_ = 0;
};

}  // namespace

Topology::Topology(std::string name, std::vector<int> nodes, std::vector<SitePair> edges)
    : name_(std::move(name)), nodes_(std::move(nodes)) {
  std::set<int> seen;
  for (int id : nodes_) {
    if (id < 0) throw std::invalid_argument("topology node ids must be non-negative");
    if (!seen.insert(id).second)
      throw std::invalid_argument("duplicate topology node " + std::to_string(id));
  }
  const int max_id = nodes_.empty() ? -1 : *seen.rbegin();
  index_.assign(max_id + 1, -1);
  for (int i = 0; i < size(); ++i) index_[nodes_[i]] = i;
  adj_.assign(size(), {});
  std::set<SitePair> uniq;
  for (auto [a, b] : edges) {
    if (a == b) throw std::invalid_argument("self-loop on topology node " + std::to_string(a));
    if (index_of(a) < 0 || index_of(b) < 0)
      throw std::invalid_argument("topology edge references unknown node");
    if (a > b) std::swap(a, b);
    if (!uniq.insert({a, b}).second) continue;
    edges_.push_back({a, b});
    adj_[index_of(a)].push_back(index_of(b));
    adj_[index_of(b)].push_back(index_of(a));
  }
  for (auto& v : adj_) std::sort(v.begin(), v.end());
  dist_ = bfs_all(adj_, size());
}

int Topology::index_of(int node) const {
  return node >= 0 && node < static_cast<int>(index_.size()) ? index_[node] : -1;
}

bool Topology::adjacent(int a, int b) const {
  const int ia = index_of(a), ib = index_of(b);
  if (ia < 0 || ib < 0) return false;
  return std::binary_search(adj_[ia].begin(), adj_[ia].end(), ib);
}

int Topology::max_degree() const {
  std::size_t d = 0;
  for (const auto& v : adj_) d = std::max(d, v.size());
  return static_cast<int>(d);
}

Topology grid_topology(int width, int height, std::string name) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be positive");
  if (name.empty()) name = "grid_" + std::to_string(width) + "x" + std::to_string(height);
  std::vector<int> nodes;
  std::vector<SitePair> edges;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const int id = r * width + c;
      nodes.push_back(id);
      if (c + 1 < width) edges.push_back({id, id + 1});
      if (r + 1 < height) edges.push_back({id, id + width});
    }
  return Topology(std::move(name), std::move(nodes), std::move(edges));
}

Topology read_topology(std::istream& in) {
  std::string name, line;
  std::vector<int> nodes;
  std::vector<SitePair> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto fail = [&] {
      throw std::runtime_error("topology line " + std::to_string(lineno) + ": cannot parse '" +
                               line + "'");
    };
    if (key == "layout") {
      if (!(ls >> name)) fail();
    } else if (key == "node") {
      int id;
      if (!(ls >> id)) fail();
      nodes.push_back(id);
    } else if (key == "edge") {
      int a, b;
      if (!(ls >> a >> b)) fail();
      edges.push_back({a, b});
    } else {
      fail();
    }
  }
  if (nodes.empty()) throw std::runtime_error("topology has no nodes");
  return Topology(name, std::move(nodes), std::move(edges));
}

Topology load_topology(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open topology file " + path);
  return read_topology(f);
}

void write_topology(std::ostream& out, const Topology& topo) {
  out << "layout " << (topo.name().empty() ? "unnamed" : topo.name()) << '\n';
  for (int id : topo.nodes()) out << "node " << id << '\n';
  for (const auto& [a, b] : topo.edges()) out << "edge " << a << ' ' << b << '\n';
}

void write_embedding(std::ostream& out, const EmbeddingMap& map) {
  for (std::size_t i = 0; i < map.assignment.size(); ++i)
    out << i << ' ' << map.assignment[i] << '\n';
}

EmbeddingMap read_embedding(std::istream& in) {
  std::map<int, int> pairs;
  int l, p;
  while (in >> l >> p) {
    if (l < 0 || !pairs.emplace(l, p).second)
      throw std::runtime_error("embedding: bad or repeated logical site " + std::to_string(l));
  }
  EmbeddingMap m;
  for (const auto& [k, v] : pairs) {
    if (k != static_cast<int>(m.assignment.size()))
      throw std::runtime_error("embedding: logical sites must be 0..n-1");
    m.assignment.push_back(v);
  }
  return m;
}

const char* status_name(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::Found: return "found";
    case EmbedStatus::Infeasible: return "infeasible";
    case EmbedStatus::Timeout: return "timeout";
  }
  return "?";
}

EmbedResult embed(int num_sites, const std::vector<SitePair>& graph, const Topology& topo,
                  double time_budget_seconds) {
  const auto t0 = Clock::now();
  if (num_sites < 0) throw std::invalid_argument("negative site count");
  for (const auto& [a, b] : graph)
    if (a < 0 || b < 0 || a >= num_sites || b >= num_sites || a == b)
      throw std::invalid_argument("logical edge out of range");
  EmbedResult res;
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  // Counting bounds: enough nodes, and enough nodes of each degree.
  std::vector<std::set<int>> nb(num_sites);
  for (const auto& [a, b] : graph) {
    nb[a].insert(b);
    nb[b].insert(a);
  }
  const int top = std::max(num_sites, topo.size()) + 1;
  std::vector<int> need(top + 1, 0), have(top + 1, 0);
  for (const auto& s : nb) ++need[s.size()];
  for (int x = 0; x < topo.size(); ++x) ++have[topo.neighbours(x).size()];
  bool possible = num_sites <= topo.size();
  for (int d = top, sn = 0, sh = 0; d >= 0; --d) {
    sn += need[d];
    sh += have[d];
    possible = possible && sn <= sh;
  }
  if (!possible) {
    res.status = EmbedStatus::Infeasible;
    res.seconds = elapsed();
    return res;
  }
  if (num_sites == 0) {
    res.status = EmbedStatus::Found;
    return res;
  }

  Search search(num_sites, graph, topo, time_budget_seconds);
  const int r = search.run();
  res.nodes_visited = search.visited();
  res.status = r > 0 ? EmbedStatus::Found : r == 0 ? EmbedStatus::Infeasible : EmbedStatus::Timeout;
  if (r > 0) res.map.assignment = search.assignment();
  res.seconds = elapsed();
  return res;
}

std::vector<std::string> validate(const EmbeddingMap& map, const std::vector<SitePair>& graph,
                                  const Topology& topo) {
  std::vector<std::string> problems;
  const int n = static_cast<int>(map.assignment.size());
  std::map<int, int> owner;
  for (int i = 0; i < n; ++i) {
    const int p = map.assignment[i];
    if (topo.index_of(p) < 0) {
      problems.push_back("site " + std::to_string(i) + " mapped to unknown node " +
                         std::to_string(p));
      continue;
    }
    auto [it, fresh] = owner.emplace(p, i);
    if (!fresh)
      problems.push_back("sites " + std::to_string(it->second) + " and " + std::to_string(i) +
                         " share node " + std::to_string(p));
  }
  for (const auto& [a, b] : graph) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      problems.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) + ") is unmapped");
      continue;
    }
    if (!topo.adjacent(map.assignment[a], map.assignment[b]))
      problems.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) + ") maps to (" +
                         std::to_string(map.assignment[a]) + "," +
                         std::to_string(map.assignment[b]) + ") which are not coupled");
  }
  return problems;
}

const char* mode_name(EmbedMode m) {
  return m == EmbedMode::EcbaEdges ? "ecba" : "all-nn";
}

EmbedMode parse_mode(const std::string& s) {
  if (s == "ecba") return EmbedMode::EcbaEdges;
  if (s == "all-nn") return EmbedMode::AllNearestNeighbour;
  throw std::invalid_argument("unknown embedding mode '" + s + "' (expected ecba or all-nn)");
}

std::vector<SitePair> embedding_graph(const CouplingRealization& real, EmbedMode mode) {
  const PairingPlan plan = make_plan(real);
  if (mode == EmbedMode::EcbaEdges) return interaction_graph(plan);
  std::set<SitePair> edges;
  for (int i = 0; i + 1 < real.n; ++i) edges.insert({i, i + 1});
  for (auto [a, b] : plan.rg_pairs) edges.insert({std::min(a, b), std::max(a, b)});
  return {edges.begin(), edges.end()};
}

double FeasibilityReport::time_percentile(double q) const {
  if (instances.empty()) return 0.0;
  std::vector<double> t;
  for (const auto& i : instances) t.push_back(i.seconds);
  std::sort(t.begin(), t.end());
  const double pos = std::clamp(q, 0.0, 1.0) * (t.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, t.size() - 1);
  return t[lo] + (pos - lo) * (t[hi] - t[lo]);
}

FeasibilityReport feasibility_study(int n, double delta, int num_samples, const Topology& topo,
                                    std::uint64_t seed, EmbedMode mode,
                                    double time_budget_seconds) {
  if (num_samples < 1) throw std::invalid_argument("feasibility study needs at least one sample");
  FeasibilityReport rep;
  rep.n = n;
  rep.delta = delta;
  rep.mode = mode;
  rep.topology = topo.name();
  rep.instances.resize(num_samples);
  int broken = 0;
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < num_samples; ++s) {
    auto& inst = rep.instances[s];
    inst.seed = derive_seed(seed, "feasibility", static_cast<std::uint64_t>(s));
    const auto real = sample_couplings(n, delta, inst.seed);
    const auto graph = embedding_graph(real, mode);
    const auto r = embed(n, graph, topo, time_budget_seconds);
    inst.status = r.status;
    inst.seconds = r.seconds;
    if (r.status == EmbedStatus::Found && !validate(r.map, graph, topo).empty()) broken = 1;
  }
  if (broken) throw InvariantViolation("embedding search returned an invalid map");
  for (const auto& i : rep.instances) {
    rep.found += i.status == EmbedStatus::Found;
    rep.infeasible += i.status == EmbedStatus::Infeasible;
    rep.timeout += i.status == EmbedStatus::Timeout;
  }
  return rep;
}

void write_feasibility_csv(std::ostream& out, const FeasibilityReport& r, bool header) {
  if (header) out << "n,delta,mode,topology,samples,found,infeasible,timeout,p50_s,p90_s,p99_s,max_s\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%s,%s,%d,%d,%d,%d,%.6g,%.6g,%.6g,%.6g\n", r.n, r.delta,
                mode_name(r.mode), r.topology.c_str(), r.samples(), r.found, r.infeasible,
                r.timeout, r.time_percentile(0.5), r.time_percentile(0.9),
                r.time_percentile(0.99), r.time_percentile(1.0));
  out << buf;
}

}  // namespace ecba
