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
#include <stdexcept>

#include <Eigen/Dense>

#include "ecba/disorder.hpp"
#include "ecba/statevector.hpp"

namespace ecba {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SectorChoice {
  Auto,      ///< S^z_tot = 0 when n is even and every weight is positive
  Full,      ///< whole 2^n space
  ZeroSpin,  ///< S^z_tot = 0 (requires even n)
};

struct OracleOptions {
  SectorChoice sector = SectorChoice::Auto;
  double tolerance = 1e-8;   ///< on ||H psi - E psi||
  int krylov_cap = 300;
  /// Upper bound on Krylov storage; the cap shrinks to fit.
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  int max_restarts = 200;
  bool keep_state = true;
  std::uint64_t seed = 0x5eed;
};

struct OracleResult {
  double ground_energy = 0.0;
  std::optional<QuantumState> ground_state;
  double residual = 0.0;
  std::size_t sector_dim = 0;
  int matvecs = 0;
};

inline constexpr int kOracleMaxQubits = 24;

/// Lowest eigenpair of a Heisenberg Hamiltonian by restarted Lanczos with
/// full reorthogonalization. Throws std::invalid_argument for n > 24 and
/// OracleError when the residual target is not reached.
OracleResult ground_state(const HamiltonianTerms& h, const OracleOptions& options = {});

/// C_ij of the stored ground state. Throws OracleError if it was not kept.
Eigen::MatrixXd exact_correlations(const OracleResult& result);

/// "E <value> residual <value>".
void write_oracle_result(std::ostream& out, const OracleResult& r);

}  // namespace ecba
