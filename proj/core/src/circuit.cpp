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

#include "ecba/circuit.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ecba {
namespace {

constexpr std::array<std::string_view, 13> kGateNames = {
    "RX", "RY", "RZ", "H", "X", "Y", "Z", "S", "SDG", "CZ", "RXX", "RYY", "RZZ"};

void check_site(const Circuit& c, int q) {
  if (q < 0 || q >= c.n) throw std::invalid_argument("gate site out of range");
}

void add1(Circuit& c, GateKind k, int q) {
  check_site(c, q);
  c.gates.push_back({k, q, -1, std::nullopt});
}

void add_cz(Circuit& c, int a, int b) {
  check_site(c, a);
  check_site(c, b);
  if (a == b) throw std::invalid_argument("two-qubit gate on a single site");
  c.gates.push_back({GateKind::CZ, a, b, std::nullopt});
}

void add_rotation(Circuit& c, GateKind k, int q) {
  check_site(c, q);
  c.gates.push_back({k, q, -1, c.num_params++});
}

void add_rotation2(Circuit& c, GateKind k, int a, int b) {
  check_site(c, a);
  check_site(c, b);
  if (a == b) throw std::invalid_argument("two-qubit gate on a single site");
  c.gates.push_back({k, a, b, c.num_params++});
}

void add_u_alpha(Circuit& c, int i, int j) {
  add_rotation2(c, GateKind::RXX, i, j);
  add_rotation2(c, GateKind::RYY, i, j);
  add_rotation2(c, GateKind::RZZ, i, j);
}

void add_rotation_layer(Circuit& c, GateKind first, GateKind second) {
  for (int q = 0; q < c.n; ++q) {
    add_rotation(c, first, q);
    add_rotation(c, second, q);
  }
}

void add_rotation_layer(Circuit& c, GateKind kind) {
  for (int q = 0; q < c.n; ++q) add_rotation(c, kind, q);
}

std::vector<SitePair> brick_wall_pairs(int n) {
  std::vector<SitePair> out;
  for (int start : {0, 1})
    for (int q = start; q + 1 < n; q += 2) out.push_back({q, q + 1});
  return out;
}

std::vector<SitePair> rung_pairs(int n) {
  std::vector<SitePair> out;
  for (int q = 0; q < n / 2; ++q) out.push_back({q, n - 1 - q});
  return out;
}

// One rainbow entangling layer: every pair gets two rounds of CZ followed
// by RY on both sites.
void add_pairs(Circuit& c, const std::vector<SitePair>& pairs) {
  for (const auto& [a, b] : pairs)
    for (int round = 0; round < 2; ++round) {
      c.gates.push_back({GateKind::CZ, a, b, std::nullopt});
      add_rotation(c, GateKind::RY, a);
      add_rotation(c, GateKind::RY, b);
    }
}

void require_even(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("ansatz needs an even qubit count >= 2");
}

}  // namespace

std::string_view gate_name(GateKind kind) { return kGateNames[static_cast<int>(kind)]; }

std::optional<GateKind> parse_gate_name(std::string_view name) {
  for (std::size_t i = 0; i < kGateNames.size(); ++i)
    if (kGateNames[i] == name) return static_cast<GateKind>(i);
  return std::nullopt;
}

std::set<SitePair> Circuit::layout_edges() const {
  std::set<SitePair> edges;
  for (const auto& g : gates)
    if (g.arity() == 2) edges.insert({std::min(g.q0, g.q1), std::max(g.q0, g.q1)});
  return edges;
}

void Circuit::validate() const {
  std::vector<int> uses(num_params, 0);
  for (const auto& g : gates) {
    check_site(*this, g.q0);
    if (g.arity() == 2) {
      check_site(*this, g.q1);
      if (g.q0 == g.q1) throw std::invalid_argument("two-qubit gate on a single site");
    } else if (g.q1 != -1) {
      throw std::invalid_argument("single-qubit gate carries a second site");
    }
    if (is_rotation(g.kind) != g.param.has_value())
      throw std::invalid_argument("parameter index present iff the gate is a rotation");
    if (g.param) {
      if (*g.param < 0 || *g.param >= num_params)
        throw std::invalid_argument("parameter index out of range");
      ++uses[*g.param];
    }
  }
  for (int u : uses)
    if (u != 1) throw std::invalid_argument("parameter indices must be used exactly once");
}

void append(Circuit& circuit, const Circuit& fragment) {
  if (fragment.n != circuit.n) throw std::invalid_argument("fragment qubit count mismatch");
  circuit.gates.insert(circuit.gates.end(), fragment.gates.begin(), fragment.gates.end());
  circuit.num_params = std::max(circuit.num_params, fragment.num_params);
  circuit.global_phase += fragment.global_phase;
}

Circuit singlet_init(const std::vector<SitePair>& pairs, int n) {
  Circuit c{n, {}, 0, 0.0};
  std::vector<bool> used(n, false);
  for (const auto& [i, j] : pairs) {
    check_site(c, i);
    check_site(c, j);
    if (i == j || used[i] || used[j]) throw std::invalid_argument("singlet pairs overlap");
    used[i] = used[j] = true;
    add1(c, GateKind::X, i);
    add1(c, GateKind::X, j);
    add1(c, GateKind::H, i);
    add1(c, GateKind::H, j);
    add_cz(c, i, j);
    add1(c, GateKind::H, j);
  }
  return c;
}

Circuit u_alpha(int i, int j, int param_base, int n) {
  Circuit c{n, {}, param_base, 0.0};
  add_u_alpha(c, i, j);
  return c;
}

Circuit build_ecba(const PairingPlan& plan) {
  check_plan(plan);
  Circuit c = singlet_init(plan.rg_pairs, plan.n);
  for (const auto& [i, j] : plan.add_pairs) add_u_alpha(c, i, j);
  for (const auto& [i, j] : plan.rg_pairs) add_u_alpha(c, i, j);
  return c;
}

Circuit build_hea_random(int n) {
  require_even(n);
  std::vector<SitePair> nn;
  for (int q = 0; q + 1 < n; q += 2) nn.emplace_back(q, q + 1);
  Circuit c = singlet_init(nn, n);
  for (int start : {0, 1})
    for (int q = start; q + 1 < n; q += 2) add_u_alpha(c, q, q + 1);
  return c;
}

Circuit build_rainbow_hea(const RainbowSpec& spec) {
  require_even(spec.n);
  Circuit c{spec.n, {}, 0, 0.0};
  add_rotation_layer(c, GateKind::RY);
  for (int layer = 0; layer < 2; ++layer) add_pairs(c, brick_wall_pairs(c.n));
  add_rotation_layer(c, GateKind::RX, GateKind::RZ);
  return c;
}

Circuit build_rainbow_cba(const RainbowSpec& spec) {
  require_even(spec.n);
  Circuit c{spec.n, {}, 0, 0.0};
  add_rotation_layer(c, GateKind::RY);
  add_pairs(c, rung_pairs(c.n));
  add_pairs(c, brick_wall_pairs(c.n));
  add_pairs(c, rung_pairs(c.n));
  add_rotation_layer(c, GateKind::RX, GateKind::RZ);
  return c;
}

Circuit decompose(const Circuit& c) {
  Circuit out{c.n, {}, c.num_params, c.global_phase};
  auto one = [&](GateKind k, int q) { out.gates.push_back({k, q, -1, std::nullopt}); };
  auto cz = [&](int a, int b) { out.gates.push_back({GateKind::CZ, a, b, std::nullopt}); };
  for (const auto& g : c.gates) {
    const int a = g.q0, b = g.q1;
    // CZ . RX_b(t) . CZ = exp(-i t Z_a X_b / 2); local Cliffords rotate the
    // Pauli pair into XX, YY or ZZ.
    auto core = [&] {
      cz(a, b);
      out.gates.push_back({GateKind::RX, b, -1, g.param});
      cz(a, b);
    };
    switch (g.kind) {
      case GateKind::RZZ:
        one(GateKind::H, b);
        core();
        one(GateKind::H, b);
        break;
      case GateKind::RXX:
        one(GateKind::H, a);
        core();
        one(GateKind::H, a);
        break;
      case GateKind::RYY:
        one(GateKind::SDG, a);
        one(GateKind::H, a);
        one(GateKind::SDG, b);
        core();
        one(GateKind::S, b);
        one(GateKind::H, a);
        one(GateKind::S, a);
        break;
      default:
        out.gates.push_back(g);
    }
  }
  return out;
}

bool is_decomposed(const Circuit& c) {
  return std::none_of(c.gates.begin(), c.gates.end(), [](const Gate& g) {
    return g.kind == GateKind::RXX || g.kind == GateKind::RYY || g.kind == GateKind::RZZ;
  });
}

ResourceReport resources(const Circuit& c) {
  const Circuit d = is_decomposed(c) ? c : decompose(c);
  ResourceReport r;
  r.num_params = c.num_params;
  std::vector<int> level(d.n, 0);
  std::vector<bool> in_run(d.n, false);
  for (const auto& g : d.gates) {
    if (g.arity() == 2) {
      ++r.cz_count;
      const int lvl = std::max(level[g.q0], level[g.q1]) + 1;
      level[g.q0] = level[g.q1] = lvl;
      in_run[g.q0] = in_run[g.q1] = false;
    } else if (!in_run[g.q0]) {
      ++level[g.q0];
      in_run[g.q0] = true;
    }
  }
  r.depth = d.n ? *std::max_element(level.begin(), level.end()) : 0;
  return r;
}

void write_circuit(std::ostream& out, const Circuit& c) {
  out << "n " << c.n << " params " << c.num_params << '\n';
  if (c.global_phase != 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c.global_phase);
    out << "phase " << buf << '\n';
  }
  for (const auto& g : c.gates) {
    out << gate_name(g.kind) << ' ' << g.q0;
    if (g.arity() == 2) out << ',' << g.q1;
    if (g.param) out << " p" << *g.param;
    out << '\n';
  }
}

Circuit read_circuit(std::istream& in) {
  Circuit c;
  std::string tag1, tag2;
  if (!(in >> tag1 >> c.n >> tag2 >> c.num_params) || tag1 != "n" || tag2 != "params")
    throw std::runtime_error("circuit record: malformed header");
  if (c.n < 1) throw std::runtime_error("circuit record: bad qubit count");
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind, sites, param;
    ls >> kind >> sites;
    if (kind == "phase") {
      c.global_phase = std::stod(sites);
      continue;
    }
    const auto k = parse_gate_name(kind);
    if (!k || sites.empty())
      throw std::runtime_error("circuit record: bad gate on line " + std::to_string(lineno));
    Gate g{*k, 0, -1, std::nullopt};
    const auto comma = sites.find(',');
    try {
      g.q0 = std::stoi(sites.substr(0, comma));
      if (comma != std::string::npos) g.q1 = std::stoi(sites.substr(comma + 1));
      if (ls >> param) {
        if (param.size() < 2 || param[0] != 'p') throw std::invalid_argument("param");
        g.param = std::stoi(param.substr(1));
      }
    } catch (const std::logic_error&) {
      throw std::runtime_error("circuit record: bad operands on line " + std::to_string(lineno));
    }
    if ((comma != std::string::npos) != (g.arity() == 2))
      throw std::runtime_error("circuit record: wrong site count on line " + std::to_string(lineno));
    c.gates.push_back(g);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("circuit record: ") + e.what());
  }
  return c;
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream os;
  write_circuit(os, c);
  return os.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  return read_circuit(is);
}

}  // namespace ecba
