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
#include <span>
#include <vector>

#include "ecba/circuit.hpp"
#include "ecba/disorder.hpp"

namespace ecba {

struct VqeResult {
  std::vector<double> best_params;
  double best_energy = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// Energy of every accepted iterate, starting with the initial point.
  std::vector<double> history;
};

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Exact dE/dtheta for every parameter by reverse-mode (adjoint) sweeps over
/// the statevector: one forward pass, one backward pass. Throws
/// std::invalid_argument on a parameter-count mismatch.
ValueAndGradient energy_and_gradient(const Circuit& c, std::span<const double> params,
                                     const HamiltonianTerms& h);
std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const HamiltonianTerms& h);

struct MinimizeOptions {
  double tol = 1e-6;        ///< stop when |E_k - E_{k+1}| < tol
  double gtol = 1e-9;       ///< or when max |dE/dtheta| < gtol
  int max_iters = 2000;
  int memory = 10;          ///< L-BFGS history length
  double init_low = 0.0;    ///< initial parameters ~ U[init_low, init_high)
  double init_high = 0.05;
};

/// Limited-memory BFGS with Armijo backtracking from a seeded random start.
/// Accepted steps never increase the energy.
VqeResult minimize(const Circuit& c, const HamiltonianTerms& h, std::uint64_t init_seed,
                   const MinimizeOptions& options = {});
/// Same, starting from explicit parameters.
VqeResult minimize_from(const Circuit& c, const HamiltonianTerms& h,
                        std::vector<double> start, const MinimizeOptions& options = {});

enum class AnsatzFamily { ECBA, HEA };
const char* family_name(AnsatzFamily f);
Circuit build_random_chain_ansatz(AnsatzFamily family, const CouplingRealization& real);

enum class InitRange {
  Small,  ///< U[0, 0.05), the optimizer's initialization
  Full,   ///< U[0, 2 pi)
};
const char* init_range_name(InitRange r);

struct GradientVarianceReport {
  int n = 0;
  std::vector<double> per_component_variance;
  double mean_variance = 0.0;
  int samples = 0;
  InitRange mode = InitRange::Small;
};

/// Samples `num_samples` parameter vectors, evaluates exact gradients, and
/// reports the unbiased variance of each component. num_samples >= 30.
GradientVarianceReport gradient_variance(const Circuit& c, const HamiltonianTerms& h,
                                         int num_samples, std::uint64_t seed,
                                         InitRange mode = InitRange::Small);
GradientVarianceReport gradient_variance(AnsatzFamily family, const CouplingRealization& real,
                                         int num_samples, std::uint64_t seed,
                                         InitRange mode = InitRange::Small);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  int points = 0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Record: "energy <E>", "iterations <k>", "converged <0|1>",
// "params <count>", then one parameter per line (%.17g).
void write_vqe_result(std::ostream& out, const VqeResult& r);
VqeResult read_vqe_result(std::istream& in);

}  // namespace ecba
