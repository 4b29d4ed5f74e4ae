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

#include "ecba/disorder.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ecba/rng.hpp"

namespace ecba {

void HamiltonianTerms::validate() const {
  for (const auto& t : terms) {
    if (t.i == t.j) throw std::invalid_argument("Heisenberg term couples a site to itself");
    if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n)
      throw std::invalid_argument("Heisenberg term site index out of range");
  }
}

double coupling_from_uniform(double u, double delta) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("uniform variate must lie in (0, 1]");
  return delta == 1.0 ? u : std::pow(u, delta);
}

CouplingRealization sample_couplings(int n, double delta, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("chain length must be even and >= 2");
  if (!(delta >= 1.0)) throw std::invalid_argument("disorder strength delta must be >= 1");
  CouplingRealization real{n, delta, seed, {}};
  real.couplings.reserve(n - 1);
  Rng rng(seed);
  for (int i = 0; i < n - 1; ++i)
    real.couplings.push_back(coupling_from_uniform(rng.uniform_open_closed(), delta));
  return real;
}

HamiltonianTerms rainbow_terms(const RainbowSpec& spec) {
  if (spec.n < 2 || spec.n % 2 != 0) throw std::invalid_argument("rainbow chain needs even n >= 2");
  if (!(spec.alpha > 0.0) || !(spec.j > 0.0))
    throw std::invalid_argument("rainbow couplings must be positive");
  HamiltonianTerms h{spec.n, {}};
  for (int i = 0; i + 1 < spec.n; ++i) h.terms.push_back({i, i + 1, spec.alpha});
  for (int i = 0; i < spec.n / 2; ++i) h.terms.push_back({i, spec.n - 1 - i, spec.j});
  return h;
}

HamiltonianTerms chain_terms(const CouplingRealization& real) {
  if (static_cast<int>(real.couplings.size()) != real.n - 1)
    throw std::invalid_argument("realization must carry n-1 couplings");
  HamiltonianTerms h{real.n, {}};
  for (int i = 0; i + 1 < real.n; ++i) h.terms.push_back({i, i + 1, real.couplings[i]});
  return h;
}

RelativeAccuracy relative_accuracy(double x_exact, double x) {
  if (x_exact == 0.0) throw std::invalid_argument("relative accuracy undefined for zero reference");
  return {1.0 - std::abs(x_exact - x) / std::abs(x_exact), x / x_exact};
}

double relative_error(double x_exact, double x) {
  if (x_exact == 0.0) throw std::invalid_argument("relative error undefined for zero reference");
  return std::abs(x_exact - x) / std::abs(x_exact);
}

void write_realization(std::ostream& out, const CouplingRealization& real) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", real.delta);
  out << real.n << ' ' << buf << ' ' << real.seed << '\n';
  for (double j : real.couplings) {
    std::snprintf(buf, sizeof buf, "%.17g", j);
    out << buf << '\n';
  }
}

CouplingRealization read_realization(std::istream& in) {
  CouplingRealization real;
  if (!(in >> real.n >> real.delta >> real.seed))
    throw std::runtime_error("realization record: malformed header");
  if (real.n < 2 || real.n % 2 != 0) throw std::runtime_error("realization record: bad n");
  real.couplings.resize(real.n - 1);
  for (auto& j : real.couplings) {
    if (!(in >> j)) throw std::runtime_error("realization record: missing coupling");
    if (!(j > 0.0)) throw std::runtime_error("realization record: non-positive coupling");
  }
  return real;
}

std::string format_realization(const CouplingRealization& real) {
  std::ostringstream os;
  write_realization(os, real);
  return os.str();
}

CouplingRealization parse_realization(const std::string& text) {
  std::istringstream is(text);
  return read_realization(is);
}

}  // namespace ecba
