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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecba/disorder.hpp"
#include "ecba/rg_flow.hpp"

namespace ecba {

enum class GateKind : std::uint8_t {
  RX, RY, RZ, H, X, Y, Z, S, SDG, CZ, RXX, RYY, RZZ
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);

constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::CZ || k == GateKind::RXX || k == GateKind::RYY || k == GateKind::RZZ;
}
constexpr bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::RXX ||
         k == GateKind::RYY || k == GateKind::RZZ;
}
constexpr bool is_pauli(GateKind k) {
  return k == GateKind::X || k == GateKind::Y || k == GateKind::Z;
}

/// A gate on one or two sites. Rotations exp(-i theta P / 2) always carry a
/// parameter index; fixed gates never do.
struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  std::optional<int> param;

  int arity() const { return is_two_qubit(kind) ? 2 : 1; }
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Flat, ordered gate list over n qubits with a parameter table.
///
/// `global_phase` is the phase picked up by exact transformations (Pauli
/// twirling); the simulator applies it so transformed circuits reproduce the
/// original statevector exactly.
struct Circuit {
  int n = 0;
  std::vector<Gate> gates;
  int num_params = 0;
  double global_phase = 0.0;

  /// Site pairs touched by two-qubit gates, stored with first < second.
  std::set<SitePair> layout_edges() const;

  /// Checks site ranges, distinct two-qubit sites, and that parameter
  /// indices are exactly 0..num_params-1 with no sharing.
  void validate() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct ResourceReport {
  int cz_count = 0;
  int depth = 0;
  int num_params = 0;
};

/// Appends `fragment` (same n) to `circuit`; parameter indices are kept.
void append(Circuit& circuit, const Circuit& fragment);

/// Singlet (|01> - |10>)/sqrt(2) on every pair: X, X, H on the first site,
/// then CNOT written as H CZ H. Throws on overlapping pairs.
Circuit singlet_init(const std::vector<SitePair>& pairs, int n);

/// RXX RYY RZZ on (i, j) with parameters param_base .. param_base + 2.
Circuit u_alpha(int i, int j, int param_base, int n);

/// Emergent-coupling ansatz: RG singlets, U_alpha on the added bonds in
/// selection order, then U_alpha on the RG pairs in decimation order.
Circuit build_ecba(const PairingPlan& plan);

/// Nearest-neighbour singlets followed by one brick-wall layer of U_alpha
/// (even bonds, then odd bonds).
Circuit build_hea_random(int n);

/// Rainbow-chain ansaetze. An RY layer opens the circuit; within each
/// entangling layer every pair receives two rounds of CZ followed by RY on
/// both sites; every qubit ends with RX RZ.
///
/// HEA: two nearest-neighbour brick-wall layers (36 CZ at n = 10).
/// CBA: rung layer, nearest-neighbour brick-wall layer, rung layer
/// (38 CZ at n = 10).
Circuit build_rainbow_hea(const RainbowSpec& spec);
Circuit build_rainbow_cba(const RainbowSpec& spec);

/// Rewrites RXX/RYY/RZZ into {CZ, H, S, SDG, RX}; two CZ per rotation.
Circuit decompose(const Circuit& c);
bool is_decomposed(const Circuit& c);

/// Counts after decomposition. Depth is the longest path through the gate
/// dependency DAG where each maximal run of single-qubit gates on one qubit
/// counts as a single layer.
ResourceReport resources(const Circuit& c);

// Text format: header "n <count> params <count>", optional "phase <value>",
// then one gate per line "KIND site[,site] [p<index>]".
void write_circuit(std::ostream& out, const Circuit& c);
Circuit read_circuit(std::istream& in);
std::string format_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace ecba
