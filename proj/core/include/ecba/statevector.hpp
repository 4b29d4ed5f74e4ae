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
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ecba/circuit.hpp"
#include "ecba/disorder.hpp"
#include "ecba/rng.hpp"

namespace ecba {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

/// Dense statevector. Qubit q is bit q of the basis index (qubit 0 is the
/// least significant bit).
class QuantumState {
 public:
  static constexpr int kMaxQubits = 30;

  /// |0...0>. Throws std::invalid_argument for n < 1 or n > kMaxQubits.
  explicit QuantumState(int n);
  QuantumState(int n, std::vector<Complex> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<Complex> amplitudes() { return amps_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

 private:
  int n_;
  std::vector<Complex> amps_;
};

Complex inner_product(const QuantumState& a, const QuantumState& b);
/// |<a|b>|^2 for normalized states.
double fidelity(const QuantumState& a, const QuantumState& b);

Mat2 gate_matrix(GateKind kind, double theta = 0.0);
Mat2 matmul(const Mat2& a, const Mat2& b);

void apply_matrix(QuantumState& s, int q, const Mat2& m);
void apply_cz(QuantumState& s, int a, int b);
/// Applies one gate; rotations read their angle from `params`.
void apply_gate(QuantumState& s, const Gate& g, std::span<const double> params);
/// Applies the inverse of one gate.
void apply_gate_inverse(QuantumState& s, const Gate& g, std::span<const double> params);

/// <lhs| P |rhs> where P is the Pauli generator of rotation gate `g`.
Complex generator_overlap(const QuantumState& lhs, const QuantumState& rhs, const Gate& g);

/// U(params)|0...0>, including the circuit's global phase. Throws
/// std::invalid_argument on a parameter-count mismatch.
QuantumState run(const Circuit& c, std::span<const double> params);

/// H|psi> for a Heisenberg Hamiltonian.
QuantumState apply_hamiltonian(const QuantumState& s, const HamiltonianTerms& h);
double energy(const QuantumState& s, const HamiltonianTerms& h);

/// <X_i X_j>, <Y_i Y_j>, <Z_i Z_j>.
std::array<double, 3> two_point(const QuantumState& s, int i, int j);

/// C_ij = <XX> + <YY> + <ZZ>; diagonal fixed to 3.
Eigen::MatrixXd correlation_matrix(const QuantumState& s);
/// Pairs (i < j) with C_ij < -1, which certifies entanglement of the pair.
std::vector<SitePair> witness_pairs(const Eigen::MatrixXd& c);

enum class Basis : std::uint8_t { X, Y, Z };
inline constexpr std::array<Basis, 3> kAllBases = {Basis::X, Basis::Y, Basis::Z};
char basis_name(Basis b);

/// Measurement record in one global basis; keys are basis-state indices.
struct ShotTable {
  Basis basis = Basis::Z;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t shots = 0;
};

/// Rotates every qubit so that a Z measurement reads out `basis`
/// (H for X, S^dagger then H for Y).
void rotate_to_basis(QuantumState& s, Basis basis);
Mat2 basis_change(Basis basis);

/// Draws `shots` basis indices from |amplitude|^2.
std::vector<std::uint64_t> sample_indices(const QuantumState& s, std::uint64_t shots,
                                          Rng& rng);
ShotTable sample_shots(const QuantumState& s, Basis basis, std::uint64_t shots,
                       std::uint64_t seed);

/// Mean of (-1)^(b_i xor b_j) over the table.
double parity(const ShotTable& t, int i, int j);

struct EnergyEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Energy from one table per basis. Within a basis the per-shot energy
/// sample carries all term correlations; bases are independent.
EnergyEstimate energy_from_shots(std::span<const ShotTable> tables, const HamiltonianTerms& h);

// CSV "basis,bitstring,count"; bitstrings print qubit n-1 first.
void write_shots_csv(std::ostream& out, std::span<const ShotTable> tables, int n);
std::vector<ShotTable> read_shots_csv(std::istream& in);

}  // namespace ecba
