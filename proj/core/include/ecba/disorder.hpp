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
#include <utility>
#include <vector>

namespace ecba {

using SitePair = std::pair<int, int>;

/// Seeded draw of the bond strengths of an open n-site chain.
///
/// couplings[i] joins sites i and i+1. The record is self-contained: the
/// same (n, delta, seed) always reproduces bit-identical couplings.
struct CouplingRealization {
  int n = 0;
  double delta = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> couplings;

  friend bool operator==(const CouplingRealization&,
                         const CouplingRealization&) = default;
};

/// Rainbow chain: nearest-neighbour strength `alpha` and mirror rungs
/// (i, n-1-i) of strength `j`.
struct RainbowSpec {
  int n = 10;
  double alpha = 1.0;
  double j = 100.0;
};

/// weight * (S_i . S_j) with S = sigma / 2, i.e. (weight / 4)(XX + YY + ZZ).
struct HeisenbergTerm {
  int i = 0;
  int j = 0;
  double weight = 0.0;

  friend bool operator==(const HeisenbergTerm&, const HeisenbergTerm&) = default;
};

struct HamiltonianTerms {
  int n = 0;
  std::vector<HeisenbergTerm> terms;

  /// Throws std::invalid_argument on i == j or out-of-range sites.
  void validate() const;
};

/// Inverse CDF of P(J) = J^(1/delta - 1) / delta on (0, 1]: J = u^delta.
double coupling_from_uniform(double u, double delta);

/// Draws n-1 couplings i.i.d. from the power-law disorder distribution.
/// Throws std::invalid_argument for odd n, n < 2 or delta < 1.
CouplingRealization sample_couplings(int n, double delta, std::uint64_t seed);

HamiltonianTerms rainbow_terms(const RainbowSpec& spec);
HamiltonianTerms chain_terms(const CouplingRealization& real);

struct RelativeAccuracy {
  double accuracy = 0.0;  ///< 1 - |exact - x| / |exact|
  double ratio = 0.0;     ///< x / exact; above 1 means overshoot
};

/// Throws std::invalid_argument when x_exact == 0.
RelativeAccuracy relative_accuracy(double x_exact, double x);

/// |x - exact| / |exact|.
double relative_error(double x_exact, double x);

// Text record: "n delta seed" header, then one coupling per line (%.17g).
void write_realization(std::ostream& out, const CouplingRealization& real);
CouplingRealization read_realization(std::istream& in);
std::string format_realization(const CouplingRealization& real);
CouplingRealization parse_realization(const std::string& text);

}  // namespace ecba
