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

#include "ecba/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ecba/rng.hpp"

namespace ecba {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr std::size_t kParallelDim = std::size_t{1} << 14;

inline std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

// Index of the k-th basis state with bit q cleared.
inline std::uint64_t insert_zero(std::uint64_t k, int q) {
  const std::uint64_t low = k & (bit(q) - 1);
  return ((k >> q) << (q + 1)) | low;
}

// Index of the k-th basis state with bits lo < hi both cleared.
inline std::uint64_t insert_two_zeros(std::uint64_t k, int lo, int hi) {
  return insert_zero(insert_zero(k, lo), hi);
}

double angle_of(const Gate& g, std::span<const double> params) {
  return g.param ? params[*g.param] : 0.0;
}

void check_sites(const QuantumState& s, const Gate& g) {
  const int n = s.num_qubits();
  if (g.q0 < 0 || g.q0 >= n || (g.arity() == 2 && (g.q1 < 0 || g.q1 >= n || g.q1 == g.q0)))
    throw std::invalid_argument("gate site out of range for state");
}

// exp(-i theta P P / 2) for P in {X, Y}; mixes |b> with |b ^ mask>.
void apply_pair_rotation(QuantumState& s, int a, int b, double theta, bool yy) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  const int lo = std::min(a, b), hi = std::max(a, b);
  const std::uint64_t ma = bit(a), mb = bit(b);
  const std::size_t quarter = s.dim() / 4;
  auto amps = s.amplitudes();
  // YY|00> = -|11>, YY|01> = |10>; XX has all signs +1.
  const Complex same = yy ? Complex(0, sn) : Complex(0, -sn);
  const Complex diff{0, -sn};
#pragma omp parallel for if (s.dim() >= kParallelDim)
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::uint64_t i00 = insert_two_zeros(k, lo, hi);
    const std::uint64_t i11 = i00 | ma | mb, i01 = i00 | ma, i10 = i00 | mb;
    const Complex a00 = amps[i00], a11 = amps[i11], a01 = amps[i01], a10 = amps[i10];
    amps[i00] = c * a00 + same * a11;
    amps[i11] = c * a11 + same * a00;
    amps[i01] = c * a01 + diff * a10;
    amps[i10] = c * a10 + diff * a01;
  }
}

void apply_zz_rotation(QuantumState& s, int a, int b, double theta) {
  const Complex even = std::polar(1.0, -theta / 2), odd = std::polar(1.0, theta / 2);
  const std::uint64_t ma = bit(a), mb = bit(b);
  auto amps = s.amplitudes();
  const std::size_t dim = s.dim();
#pragma omp parallel for if (dim >= kParallelDim)
  for (std::size_t i = 0; i < dim; ++i)
    amps[i] *= (((i & ma) != 0) == ((i & mb) != 0)) ? even : odd;
}

void apply_gate_angle(QuantumState& s, const Gate& g, double theta) {
  check_sites(s, g);
  switch (g.kind) {
    case GateKind::CZ:
      apply_cz(s, g.q0, g.q1);
      break;
    case GateKind::RXX:
      apply_pair_rotation(s, g.q0, g.q1, theta, false);
      break;
    case GateKind::RYY:
      apply_pair_rotation(s, g.q0, g.q1, theta, true);
      break;
    case GateKind::RZZ:
      apply_zz_rotation(s, g.q0, g.q1, theta);
      break;
    default:
      apply_matrix(s, g.q0, gate_matrix(g.kind, theta));
  }
}

}  // namespace

QuantumState::QuantumState(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("statevector qubit count must be in [1, 30]");
  amps_.assign(std::size_t{1} << n, Complex{});
  amps_[0] = 1.0;
}

QuantumState::QuantumState(int n, std::vector<Complex> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("statevector qubit count must be in [1, 30]");
  if (amps_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("amplitude count must be 2^n");
}

double QuantumState::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void QuantumState::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= nrm;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("state dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::norm(inner_product(a, b));
}

Mat2 gate_matrix(GateKind kind, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::RX: return {c, Complex(0, -s), Complex(0, -s), c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -kI, kI, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::S: return {1, 0, 0, kI};
    case GateKind::SDG: return {1, 0, 0, -kI};
    default: throw std::invalid_argument("not a single-qubit gate");
  }
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

void apply_matrix(QuantumState& s, int q, const Mat2& m) {
  if (q < 0 || q >= s.num_qubits()) throw std::invalid_argument("qubit out of range");
  auto amps = s.amplitudes();
  const std::size_t half = s.dim() / 2;
  const std::uint64_t mq = bit(q);
  if (m[1] == Complex{} && m[2] == Complex{}) {
#pragma omp parallel for if (s.dim() >= kParallelDim)
    for (std::size_t k = 0; k < half; ++k) {
      const std::uint64_t i0 = insert_zero(k, q);
      amps[i0] *= m[0];
      amps[i0 | mq] *= m[3];
    }
    return;
  }
#pragma omp parallel for if (s.dim() >= kParallelDim)
  for (std::size_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(k, q), i1 = i0 | mq;
    const Complex a0 = amps[i0], a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_cz(QuantumState& s, int a, int b) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  const std::uint64_t both = bit(a) | bit(b);
  auto amps = s.amplitudes();
  const std::size_t quarter = s.dim() / 4;
#pragma omp parallel for if (s.dim() >= kParallelDim)
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::uint64_t i = insert_two_zeros(k, lo, hi) | both;
    amps[i] = -amps[i];
  }
}

void apply_gate(QuantumState& s, const Gate& g, std::span<const double> params) {
  apply_gate_angle(s, g, angle_of(g, params));
}

void apply_gate_inverse(QuantumState& s, const Gate& g, std::span<const double> params) {
  if (g.kind == GateKind::S) {
    apply_matrix(s, g.q0, gate_matrix(GateKind::SDG));
  } else if (g.kind == GateKind::SDG) {
    apply_matrix(s, g.q0, gate_matrix(GateKind::S));
  } else {
    apply_gate_angle(s, g, -angle_of(g, params));
  }
}

// <lhs| P |rhs> for the Pauli generator of a rotation gate.
Complex generator_overlap(const QuantumState& lhs, const QuantumState& rhs, const Gate& g) {
  const auto l = lhs.amplitudes();
  const auto r = rhs.amplitudes();
  const std::uint64_t ma = bit(g.q0);
  const std::uint64_t mb = g.arity() == 2 ? bit(g.q1) : 0;
  const std::size_t dim = lhs.dim();
  double re = 0.0, im = 0.0;
  auto acc = [&](std::size_t i, Complex v) {
    const Complex t = std::conj(l[i]) * v;
    re += t.real();
    im += t.imag();
  };
  switch (g.kind) {
    case GateKind::RX:
      for (std::size_t i = 0; i < dim; ++i) acc(i, r[i ^ ma]);
      break;
    case GateKind::RY:
      for (std::size_t i = 0; i < dim; ++i) acc(i, ((i & ma) ? kI : -kI) * r[i ^ ma]);
      break;
    case GateKind::RZ:
      for (std::size_t i = 0; i < dim; ++i) acc(i, (i & ma) ? -r[i] : r[i]);
      break;
    case GateKind::RXX:
      for (std::size_t i = 0; i < dim; ++i) acc(i, r[i ^ ma ^ mb]);
      break;
    case GateKind::RYY:
      for (std::size_t i = 0; i < dim; ++i) {
        const bool same = ((i & ma) != 0) == ((i & mb) != 0);
        acc(i, same ? -r[i ^ ma ^ mb] : r[i ^ ma ^ mb]);
      }
      break;
    case GateKind::RZZ:
      for (std::size_t i = 0; i < dim; ++i) {
        const bool same = ((i & ma) != 0) == ((i & mb) != 0);
        acc(i, same ? r[i] : -r[i]);
      }
      break;
    default:
      throw std::invalid_argument("gate has no rotation generator");
  }
  return {re, im};
}

QuantumState run(const Circuit& c, std::span<const double> params) {
  if (static_cast<int>(params.size()) != c.num_params)
    throw std::invalid_argument("parameter vector length does not match the circuit");
  QuantumState s(c.n);
  for (const auto& g : c.gates) apply_gate(s, g, params);
  if (c.global_phase != 0.0) {
    const Complex ph = std::polar(1.0, c.global_phase);
    for (auto& a : s.amplitudes()) a *= ph;
  }
  return s;
}

QuantumState apply_hamiltonian(const QuantumState& s, const HamiltonianTerms& h) {
  if (h.n != s.num_qubits()) throw std::invalid_argument("Hamiltonian size does not match state");
  h.validate();
  QuantumState out(s.num_qubits(), std::vector<Complex>(s.dim()));
  const auto in = s.amplitudes();
  auto res = out.amplitudes();
  const std::size_t dim = s.dim();
  for (const auto& t : h.terms) {
    const std::uint64_t mi = bit(t.i), mj = bit(t.j), m = mi | mj;
    const double w = t.weight / 4.0;
#pragma omp parallel for if (dim >= kParallelDim)
    for (std::size_t b = 0; b < dim; ++b) {
      const bool same = ((b & mi) != 0) == ((b & mj) != 0);
      res[b] += same ? w * in[b] : w * (2.0 * in[b ^ m] - in[b]);
    }
  }
  return out;
}

std::array<double, 3> two_point(const QuantumState& s, int i, int j) {
  const int n = s.num_qubits();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    throw std::invalid_argument("two-point correlator needs distinct in-range sites");
  const std::uint64_t mi = bit(i), mj = bit(j), m = mi | mj;
  const auto a = s.amplitudes();
  double xx = 0.0, yy = 0.0, zz = 0.0;
  for (std::size_t b = 0; b < s.dim(); ++b) {
    const bool same = ((b & mi) != 0) == ((b & mj) != 0);
    const double re = (std::conj(a[b]) * a[b ^ m]).real();
    xx += re;
    yy += same ? -re : re;
    zz += same ? std::norm(a[b]) : -std::norm(a[b]);
  }
  return {xx, yy, zz};
}

double energy(const QuantumState& s, const HamiltonianTerms& h) {
  if (h.n != s.num_qubits()) throw std::invalid_argument("Hamiltonian size does not match state");
  h.validate();
  double e = 0.0;
  for (const auto& t : h.terms) {
    if (t.weight == 0.0) continue;
    const auto c = two_point(s, t.i, t.j);
    e += t.weight / 4.0 * (c[0] + c[1] + c[2]);
  }
  return e;
}

Eigen::MatrixXd correlation_matrix(const QuantumState& s) {
  const int n = s.num_qubits();
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, 3.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto p = two_point(s, i, j);
      c(i, j) = c(j, i) = p[0] + p[1] + p[2];
    }
  return c;
}

std::vector<SitePair> witness_pairs(const Eigen::MatrixXd& c) {
  std::vector<SitePair> out;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = i + 1; j < c.cols(); ++j)
      if (c(i, j) < -1.0) out.emplace_back(i, j);
  return out;
}

char basis_name(Basis b) { return b == Basis::X ? 'X' : b == Basis::Y ? 'Y' : 'Z'; }

Mat2 basis_change(Basis basis) {
  switch (basis) {
    case Basis::X: return gate_matrix(GateKind::H);
    case Basis::Y: return matmul(gate_matrix(GateKind::H), gate_matrix(GateKind::SDG));
    case Basis::Z: return {1, 0, 0, 1};
  }
  return {1, 0, 0, 1};
}

void rotate_to_basis(QuantumState& s, Basis basis) {
  if (basis == Basis::Z) return;
  const Mat2 m = basis_change(basis);
  for (int q = 0; q < s.num_qubits(); ++q) apply_matrix(s, q, m);
}

std::vector<std::uint64_t> sample_indices(const QuantumState& s, std::uint64_t shots, Rng& rng) {
  std::vector<double> cdf(s.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    acc += std::norm(s[i]);
    cdf[i] = acc;
  }
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
  return out;
}

ShotTable sample_shots(const QuantumState& s, Basis basis, std::uint64_t shots,
                       std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shot count must be positive");
  QuantumState rotated = s;
  rotate_to_basis(rotated, basis);
  Rng rng(seed);
  ShotTable t{basis, {}, shots};
  for (auto idx : sample_indices(rotated, shots, rng)) ++t.counts[idx];
  return t;
}

double parity(const ShotTable& t, int i, int j) {
  if (t.shots == 0) throw std::invalid_argument("empty shot table");
  const std::uint64_t m = bit(i) | bit(j);
  long double acc = 0.0;
  for (const auto& [b, cnt] : t.counts)
    acc += (std::popcount(b & m) % 2 == 0) ? static_cast<long double>(cnt)
                                           : -static_cast<long double>(cnt);
  return static_cast<double>(acc / t.shots);
}

EnergyEstimate energy_from_shots(std::span<const ShotTable> tables, const HamiltonianTerms& h) {
  h.validate();
  EnergyEstimate est;
  double var = 0.0;
  for (Basis basis : kAllBases) {
    const auto it = std::find_if(tables.begin(), tables.end(),
                                 [&](const ShotTable& t) { return t.basis == basis; });
    if (it == tables.end())
      throw std::invalid_argument(std::string("missing shot table for basis ") + basis_name(basis));
    if (it->shots == 0) throw std::invalid_argument("empty shot table");
    double sum = 0.0, sum2 = 0.0;
    for (const auto& [b, cnt] : it->counts) {
      double e = 0.0;
      for (const auto& t : h.terms) {
        const bool odd = (((b >> t.i) ^ (b >> t.j)) & 1) != 0;
        e += (odd ? -t.weight : t.weight) / 4.0;
      }
      sum += e * cnt;
      sum2 += e * e * cnt;
    }
    const double n = static_cast<double>(it->shots);
    const double mean = sum / n;
    est.value += mean;
    if (n > 1) var += std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) / n;
  }
  est.std_error = std::sqrt(var);
  return est;
}

void write_shots_csv(std::ostream& out, std::span<const ShotTable> tables, int n) {
  out << "basis,bitstring,count\n";
  for (const auto& t : tables)
    for (const auto& [b, cnt] : t.counts) {
      std::string bits(n, '0');
      for (int q = 0; q < n; ++q)
        if ((b >> q) & 1) bits[n - 1 - q] = '1';
      out << basis_name(t.basis) << ',' << bits << ',' << cnt << '\n';
    }
}

std::vector<ShotTable> read_shots_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "basis,bitstring,count")
    throw std::runtime_error("shot CSV: missing header");
  std::vector<ShotTable> tables;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string basis, bits, count;
    if (!std::getline(ls, basis, ',') || !std::getline(ls, bits, ',') || !std::getline(ls, count))
      throw std::runtime_error("shot CSV: malformed row '" + line + "'");
    Basis b;
    if (basis == "X") b = Basis::X;
    else if (basis == "Y") b = Basis::Y;
    else if (basis == "Z") b = Basis::Z;
    else throw std::runtime_error("shot CSV: unknown basis '" + basis + "'");
    std::uint64_t idx = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw std::runtime_error("shot CSV: bad bitstring");
      idx = (idx << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    auto it = std::find_if(tables.begin(), tables.end(), [&](const ShotTable& t) { return t.basis == b; });
    if (it == tables.end()) {
      tables.push_back({b, {}, 0});
      it = tables.end() - 1;
    }
    const std::uint64_t cnt = std::stoull(count);
    it->counts[idx] += cnt;
    it->shots += cnt;
  }
  return tables;
}

}  // namespace ecba
