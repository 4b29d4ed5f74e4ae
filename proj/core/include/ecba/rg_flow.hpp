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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecba/disorder.hpp"

namespace ecba {

/// Pairing structure extracted from the strong-disorder RG flow.
///
/// rg_pairs is a perfect matching of the chain sites in decimation order;
/// add_pairs holds n/2 - 1 nearest-neighbour bonds outside that matching in
/// strength-descending order.
struct PairingPlan {
  int n = 0;
  std::vector<SitePair> rg_pairs;
  std::vector<SitePair> add_pairs;
  CouplingRealization source;
};

/// Thrown when a pairing plan breaks a structural invariant. This always
/// indicates a bug, never bad user input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One decimation step, recorded for inspection and tests.
struct DecimationStep {
  SitePair pair;
  /// Renormalized coupling J' = J_left * J_right / (2 J_max) created by an
  /// interior decimation, or a negative value for boundary steps.
  double renormalized = -1.0;
};

/// Strong-disorder RG pairing: repeatedly decimate the strongest surviving
/// bond into a singlet. Interior decimations replace the three bonds around
/// the pair by J_left * J_right / (2 J_max). Ties go to the lowest index.
std::vector<SitePair> rg_pairing(const CouplingRealization& real);
std::vector<DecimationStep> rg_trace(const CouplingRealization& real);

/// Greedily collects the n/2 - 1 strongest chain bonds that are not RG pairs.
std::vector<SitePair> select_strongest(const CouplingRealization& real,
                                       const std::vector<SitePair>& rg_pairs);

PairingPlan make_plan(const CouplingRealization& real);

/// Deduplicated undirected union of rg_pairs and add_pairs, each edge stored
/// with first < second. Throws InvariantViolation if any site has degree
/// above three or the graph contains a triangle.
std::vector<SitePair> interaction_graph(const PairingPlan& plan);

/// Checks the PairingPlan invariants; throws InvariantViolation on failure.
void check_plan(const PairingPlan& plan);

// Text format: "RG i j" lines in decimation order, then "ADD i j" lines.
void write_plan(std::ostream& out, const PairingPlan& plan);
/// Reads the pair lists; the caller attaches the source realization.
PairingPlan read_plan(std::istream& in, const CouplingRealization& source);

}  // namespace ecba
