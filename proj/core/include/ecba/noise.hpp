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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ecba/circuit.hpp"
#include "ecba/disorder.hpp"
#include "ecba/statevector.hpp"

namespace ecba {

/// Stochastic Pauli noise. Defaults correspond to a CZ fidelity of 99.37%
/// and a single-qubit fidelity of 99.91%; readout error is a typical
/// transmon value.
struct NoiseSpec {
  double p_cz = 0.0063;      ///< random non-identity two-qubit Pauli after each CZ
  double p_1q = 0.0009;      ///< random non-identity Pauli after each non-Pauli 1q gate
  double p_readout = 0.02;   ///< independent classical bit flip per qubit
  std::uint64_t seed = 0;

  static NoiseSpec none() { return {0.0, 0.0, 0.0, 0}; }
  /// Throws std::invalid_argument unless every probability is in [0, 0.5).
  void validate() const;
};

/// A mitigation stage failed; carries the stage name.
class MitigationError : public std::runtime_error {
 public:
  MitigationError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Calibrated readout attenuation too close to zero to divide out.
class UnmitigableSignal : public MitigationError {
 public:
  explicit UnmitigableSignal(const std::string& what) : MitigationError("trex", what) {}
};

inline constexpr int kDefaultTrajectories = 64;

/// Shot-based noisy execution of a decomposed circuit, one table per basis.
/// Shots are split over `trajectories` independent noise instantiations.
/// Throws std::invalid_argument for circuits containing RXX/RYY/RZZ.
std::array<ShotTable, 3> noisy_shots(const Circuit& c, std::span<const double> params,
                                     const NoiseSpec& spec, std::uint64_t shots,
                                     std::uint64_t seed, int trajectories = kDefaultTrajectories);

/// Single-basis variant. `readout_mask` bit q set means an X is applied to
/// qubit q just before measurement and the recorded bit is flipped back.
ShotTable noisy_basis_shots(const Circuit& c, std::span<const double> params,
                            const NoiseSpec& spec, Basis basis, std::uint64_t shots,
                            std::uint64_t seed, int trajectories = kDefaultTrajectories,
                            std::uint64_t readout_mask = 0);

/// Dresses every CZ in a uniformly random Pauli pair P (x) Q before it and
/// the conjugated pair CZ (P (x) Q) CZ after it. The logical unitary,
/// including global phase, is unchanged.
Circuit pauli_twirl(const Circuit& c, std::uint64_t seed);

/// Replaces each CZ by `lambda` consecutive CZ gates; lambda odd and >= 1.
Circuit fold_circuit(const Circuit& c, int lambda);

/// Inserts X X on qubits idling during two-qubit layers. X X is the identity,
/// and Pauli gates are noise-free in this model, so this transform never
/// changes any simulated outcome. Kept so pipelines can request it.
Circuit dynamical_decoupling(const Circuit& c);

/// Readout attenuation under twirled readout: factor(i, i) = <Z_i>, factor(i, j)
/// = <Z_i Z_j> measured on |0...0>.
struct ReadoutCalibration {
  Eigen::MatrixXd factor;
  std::uint64_t shots = 0;
};

ReadoutCalibration calibrate_readout(int n, const NoiseSpec& spec, std::uint64_t shots_per_instance,
                                     int n_instances, std::uint64_t seed);

struct TrexResult {
  int n = 0;
  /// Corrected parities per basis (X, Y, Z): (i, j) is <P_i P_j>, (i, i) is <P_i>.
  std::array<Eigen::MatrixXd, 3> parity;
  std::array<Eigen::MatrixXd, 3> std_error;
  std::array<Eigen::MatrixXd, 3> raw;
  ReadoutCalibration calibration;
  EnergyEstimate energy;  ///< filled when a Hamiltonian is supplied
  std::uint64_t shots = 0;
};

struct TrexOptions {
  int trajectories = kDefaultTrajectories;
  const HamiltonianTerms* hamiltonian = nullptr;
};

/// Twirled readout error extinction over circuit instances (typically Pauli
/// twirls of one logical circuit). Each instance is run in all three bases
/// with its own random pre-measurement X mask; results are un-flipped and
/// divided by the calibrated attenuation. Throws UnmitigableSignal when an
/// attenuation factor is below 0.05.
TrexResult trex_estimate(std::span<const Circuit> instances, std::span<const double> params,
                         const NoiseSpec& spec, std::uint64_t shots_per_instance,
                         std::uint64_t seed, const ReadoutCalibration& calibration,
                         const TrexOptions& options = {});
/// Calibrates internally with the same instance count and shot budget.
TrexResult trex_estimate(std::span<const Circuit> instances, std::span<const double> params,
                         const NoiseSpec& spec, std::uint64_t shots_per_instance,
                         std::uint64_t seed, const TrexOptions& options = {});

struct LadderPoint {
  int lambda = 1;
  double value = 0.0;
  double std_error = 0.0;
};

struct MitigatedEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::vector<LadderPoint> ladder;
  /// Exponential model O(lambda) = o0 * exp(a * lambda); for the linear
  /// fallback o0 is the intercept and a the slope.
  double o0 = 0.0;
  double a = 0.0;
  bool fallback_used = false;
  std::uint64_t shots = 0;
  std::uint64_t calibration_shots = 0;
};

/// Zero-noise extrapolation with the exponential model, falling back to a
/// straight line when the ladder changes sign or any point is within ten
/// standard errors of zero. Needs >= 2 distinct odd positive lambdas.
MitigatedEstimate zne_extrapolate(std::span<const LadderPoint> ladder);

struct MitigationOptions {
  int twirl_instances = 16;
  std::uint64_t shots = 10000;  ///< per instance and basis
  std::vector<int> ladder = {1, 3, 5};
  int trajectories = kDefaultTrajectories;
  int bootstrap_resamples = 200;
};

/// Full stack: decompose, fold for each lambda, 16 Pauli twirls, noisy
/// shots with TREX, ZNE. The standard error comes from a parametric
/// bootstrap over the ladder points.
MitigatedEstimate mitigated_energy(const Circuit& c, std::span<const double> params,
                                   const HamiltonianTerms& h, const NoiseSpec& spec,
                                   std::uint64_t seed, const MitigationOptions& options = {});

/// Raw estimate: one execution per basis at lambda = 1, no twirling, no
/// readout correction.
EnergyEstimate unmitigated_energy(const Circuit& c, std::span<const double> params,
                                  const HamiltonianTerms& h, const NoiseSpec& spec,
                                  std::uint64_t shots, std::uint64_t seed,
                                  int trajectories = kDefaultTrajectories);

/// C_ij from twirled, TREX-corrected parities at the base noise level.
Eigen::MatrixXd mitigated_correlations(const Circuit& c, std::span<const double> params,
                                       const NoiseSpec& spec, std::uint64_t seed,
                                       const MitigationOptions& options = {});

void write_mitigated(std::ostream& out, const MitigatedEstimate& m);

}  // namespace ecba
