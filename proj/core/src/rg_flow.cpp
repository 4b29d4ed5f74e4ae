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

#include "ecba/rg_flow.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace ecba {
namespace {

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

SitePair ordered(int a, int b) { return a < b ? SitePair{a, b} : SitePair{b, a}; }

void require_even_chain(const CouplingRealization& real) {
  if (real.n < 2 || real.n % 2 != 0)
    throw std::invalid_argument("RG pairing needs an even chain length");
  if (static_cast<int>(real.couplings.size()) != real.n - 1)
    throw std::invalid_argument("realization must carry n-1 couplings");
}

}  // namespace

std::vector<DecimationStep> rg_trace(const CouplingRealization& real) {
  require_even_chain(real);
  std::vector<double> bonds = real.couplings;
  std::vector<int> sites(real.n);
  for (int i = 0; i < real.n; ++i) sites[i] = i;

  std::vector<DecimationStep> steps;
  steps.reserve(real.n / 2);
  while (!sites.empty()) {
    const std::size_t k = argmax_lowest(bonds);
    DecimationStep step;
    if (sites.size() == 2) {
      step.pair = {sites[0], sites[1]};
      sites.clear();
      bonds.erase(bonds.begin());
    } else if (k == 0) {
      step.pair = {sites[0], sites[1]};
      sites.erase(sites.begin(), sites.begin() + 2);
      bonds.erase(bonds.begin(), bonds.begin() + 2);
    } else if (k == bonds.size() - 1) {
      // Rightmost bond: its two sites leave the chain, and so does the bond
      // that tied the left site to the rest of the chain.
      step.pair = {sites[k], sites[k + 1]};
      sites.erase(sites.begin() + k, sites.begin() + k + 2);
      bonds.erase(bonds.begin() + (k - 1), bonds.begin() + k + 1);
    } else {
      bonds[k - 1] = bonds[k - 1] * bonds[k + 1] / (2.0 * bonds[k]);
      step.renormalized = bonds[k - 1];
      step.pair = {sites[k], sites[k + 1]};
      sites.erase(sites.begin() + k, sites.begin() + k + 2);
      bonds.erase(bonds.begin() + k, bonds.begin() + k + 2);
    }
    steps.push_back(step);
  }
  return steps;
}

std::vector<SitePair> rg_pairing(const CouplingRealization& real) {
  std::vector<SitePair> pairs;
  for (const auto& s : rg_trace(real)) pairs.push_back(s.pair);
  return pairs;
}

std::vector<SitePair> select_strongest(const CouplingRealization& real,
                                       const std::vector<SitePair>& rg_pairs) {
  require_even_chain(real);
  std::set<SitePair> paired;
  for (const auto& [a, b] : rg_pairs) paired.insert(ordered(a, b));

  std::vector<double> bonds = real.couplings;
  std::vector<SitePair> added;
  const std::size_t wanted = static_cast<std::size_t>(real.n / 2 - 1);
  while (added.size() < wanted) {
    const std::size_t k = argmax_lowest(bonds);
    if (bonds[k] <= 0.0)
      throw InvariantViolation("ran out of chain bonds while selecting strongest couplings");
    const SitePair bond{static_cast<int>(k), static_cast<int>(k) + 1};
    if (!paired.contains(bond)) added.push_back(bond);
    bonds[k] = 0.0;
  }
  return added;
}

PairingPlan make_plan(const CouplingRealization& real) {
  PairingPlan plan;
  plan.n = real.n;
  plan.rg_pairs = rg_pairing(real);
  plan.add_pairs = select_strongest(real, plan.rg_pairs);
  plan.source = real;
  return plan;
}

std::vector<SitePair> interaction_graph(const PairingPlan& plan) {
  std::set<SitePair> edges;
  for (const auto& [a, b] : plan.rg_pairs) edges.insert(ordered(a, b));
  for (const auto& [a, b] : plan.add_pairs) edges.insert(ordered(a, b));

  std::vector<std::set<int>> adj(plan.n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b >= plan.n || a == b)
      throw InvariantViolation("interaction edge outside the chain");
    adj[a].insert(b);
    adj[b].insert(a);
  }
  for (int v = 0; v < plan.n; ++v)
    if (adj[v].size() > 3) throw InvariantViolation("interaction graph degree exceeds three");
  for (const auto& [a, b] : edges)
    for (int c : adj[a])
      if (c != b && adj[b].contains(c))
        throw InvariantViolation("interaction graph contains a triangle");
  return {edges.begin(), edges.end()};
}

void check_plan(const PairingPlan& plan) {
  if (static_cast<int>(plan.rg_pairs.size()) != plan.n / 2)
    throw InvariantViolation("RG pairs do not cover the chain");
  std::vector<int> seen(plan.n, 0);
  std::set<SitePair> paired;
  for (const auto& [a, b] : plan.rg_pairs) {
    if (a < 0 || b < 0 || a >= plan.n || b >= plan.n || a == b)
      throw InvariantViolation("RG pair outside the chain");
    ++seen[a];
    ++seen[b];
    paired.insert(ordered(a, b));
  }
  for (int c : seen)
    if (c != 1) throw InvariantViolation("RG pairs are not a perfect matching");
  if (static_cast<int>(plan.add_pairs.size()) != plan.n / 2 - 1)
    throw InvariantViolation("wrong number of added pairs");
  for (const auto& [a, b] : plan.add_pairs) {
    if (std::abs(a - b) != 1) throw InvariantViolation("added pair is not a chain bond");
    if (paired.contains(ordered(a, b))) throw InvariantViolation("added pair duplicates an RG pair");
  }
  interaction_graph(plan);
}

void write_plan(std::ostream& out, const PairingPlan& plan) {
  for (const auto& [a, b] : plan.rg_pairs) out << "RG " << a << ' ' << b << '\n';
  for (const auto& [a, b] : plan.add_pairs) out << "ADD " << a << ' ' << b << '\n';
}

PairingPlan read_plan(std::istream& in, const CouplingRealization& source) {
  PairingPlan plan;
  plan.n = source.n;
  plan.source = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    int a, b;
    if (!(ls >> tag >> a >> b))
      throw std::runtime_error("pairing record: malformed line " + std::to_string(lineno));
    if (tag == "RG") {
      if (!plan.add_pairs.empty())
        throw std::runtime_error("pairing record: RG line after ADD lines");
      plan.rg_pairs.emplace_back(a, b);
    } else if (tag == "ADD") {
      plan.add_pairs.emplace_back(a, b);
    } else {
      throw std::runtime_error("pairing record: unknown tag '" + tag + "'");
    }
  }
  check_plan(plan);
  return plan;
}

}  // namespace ecba
