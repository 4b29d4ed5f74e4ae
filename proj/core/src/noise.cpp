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

#include "ecba/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>

#include "ecba/rng.hpp"

namespace ecba {
namespace {

constexpr std::array<GateKind, 4> kPauliKinds = {GateKind::H /*unused*/, GateKind::X, GateKind::Y,
                                                 GateKind::Z};

const Mat2& pauli(int p) {
  static const std::array<Mat2, 4> table = {Mat2{1, 0, 0, 1}, gate_matrix(GateKind::X),
                                            gate_matrix(GateKind::Y), gate_matrix(GateKind::Z)};
  return table[p];
}

// CZ (P x Q) CZ = phase * (P' x Q') for every Pauli pair.
struct ConjugatedPair {
  int p = 0, q = 0;
  double phase = 0.0;
};

const std::array<ConjugatedPair, 16>& cz_conjugation_table() {
  static const std::array<ConjugatedPair, 16> table = [] {
    std::array<ConjugatedPair, 16> t{};
    auto kron = [](const Mat2& a, const Mat2& b) {
      std::array<Complex, 16> m{};
      for (int ra = 0; ra < 2; ++ra)
        for (int rb = 0; rb < 2; ++rb)
          for (int ca = 0; ca < 2; ++ca)
            for (int cb = 0; cb < 2; ++cb)
              m[(ra + 2 * rb) * 4 + (ca + 2 * cb)] = a[ra * 2 + ca] * b[rb * 2 + cb];
      return m;
    };
    const std::array<double, 4> cz = {1, 1, 1, -1};
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        auto m = kron(pauli(p), pauli(q));
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) m[r * 4 + c] *= cz[r] * cz[c];
        for (int pp = 0; pp < 4; ++pp)
          for (int qq = 0; qq < 4; ++qq) {
            const auto cand = kron(pauli(pp), pauli(qq));
            Complex overlap{};
            for (int k = 0; k < 16; ++k) overlap += std::conj(cand[k]) * m[k];
            overlap /= 4.0;
            if (std::abs(overlap) > 0.5) t[p * 4 + q] = {pp, qq, std::arg(overlap)};
          }
      }
    return t;
  }();
  return table;
}

bool is_noisy_single(GateKind k) { return !is_two_qubit(k) && !is_pauli(k); }

void require_decomposed(const Circuit& c, const char* stage) {
  if (!is_decomposed(c))
    throw std::invalid_argument(std::string(stage) +
                                ": circuit must be decomposed to CZ and single-qubit gates");
}

// Accumulates single-qubit matrices per qubit and applies them lazily.
class FusedStream {
 public:
  explicit FusedStream(QuantumState& s)
      : s_(s), pending_(s.num_qubits()), has_(s.num_qubits(), 0) {}

  void one(int q, const Mat2& m) {
    pending_[q] = has_[q] ? matmul(m, pending_[q]) : m;
    has_[q] = 1;
  }
  void cz(int a, int b) {
    flush(a);
    flush(b);
    apply_cz(s_, a, b);
  }
  void flush(int q) {
    if (has_[q]) apply_matrix(s_, q, pending_[q]);
    has_[q] = 0;
  }
  void finish() {
    for (int q = 0; q < s_.num_qubits(); ++q) flush(q);
  }

 private:
  QuantumState& s_;
  std::vector<Mat2> pending_;
  std::vector<char> has_;
};

// One noise instantiation, measured `shots` times. Outcomes are returned
// after readout flips and mask removal.
std::vector<std::uint64_t> run_trajectory(const Circuit& c, std::span<const double> params,
                                          const NoiseSpec& spec, Basis basis, std::uint64_t shots,
                                          Rng& rng, std::uint64_t mask) {
  QuantumState s(c.n);
  FusedStream stream(s);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::CZ) {
      stream.cz(g.q0, g.q1);
      if (rng.bernoulli(spec.p_cz)) {
        const auto k = 1 + rng.uniform_int(15);
        if (k % 4) stream.one(g.q0, pauli(static_cast<int>(k % 4)));
        if (k / 4) stream.one(g.q1, pauli(static_cast<int>(k / 4)));
      }
    } else {
      stream.one(g.q0, gate_matrix(g.kind, g.param ? params[*g.param] : 0.0));
      if (is_noisy_single(g.kind) && rng.bernoulli(spec.p_1q))
        stream.one(g.q0, pauli(1 + static_cast<int>(rng.uniform_int(3))));
    }
  }
  const Mat2 rot = basis_change(basis);
  for (int q = 0; q < c.n; ++q) {
    stream.one(q, rot);
    if ((mask >> q) & 1) stream.one(q, pauli(1));
  }
  stream.finish();
  auto outcomes = sample_indices(s, shots, rng);
  for (auto& b : outcomes) {
    if (spec.p_readout > 0.0)
      for (int q = 0; q < c.n; ++q)
        if (rng.bernoulli(spec.p_readout)) b ^= std::uint64_t{1} << q;
    b ^= mask;
  }
  return outcomes;
}

std::uint64_t random_mask(int n, Rng& rng) {
  return n >= 64 ? rng.next_u64() : rng.next_u64() & ((std::uint64_t{1} << n) - 1);
}

// Parity sums over a histogram of outcomes; (i, i) holds single-site sums.
Eigen::MatrixXd parity_sums(const std::unordered_map<std::uint64_t, std::uint64_t>& hist, int n) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> sign(n);
  for (const auto& [b, cnt] : hist) {
    for (int q = 0; q < n; ++q) sign[q] = ((b >> q) & 1) ? -1.0 : 1.0;
    const double w = static_cast<double>(cnt);
    for (int i = 0; i < n; ++i) {
      sums(i, i) += w * sign[i];
      for (int j = i + 1; j < n; ++j) sums(i, j) += w * sign[i] * sign[j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sums(j, i) = sums(i, j);
  return sums;
}

}  // namespace

void NoiseSpec::validate() const {
  for (double p : {p_cz, p_1q, p_readout})
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("noise probabilities must lie in [0, 0.5)");
}

ShotTable noisy_basis_shots(const Circuit& c, std::span<const double> params, const NoiseSpec& spec,
                            Basis basis, std::uint64_t shots, std::uint64_t seed, int trajectories,
                            std::uint64_t readout_mask) {
  require_decomposed(c, "noisy_shots");
  spec.validate();
  if (shots == 0) throw std::invalid_argument("shot count must be positive");
  if (trajectories < 1) throw std::invalid_argument("need at least one trajectory");
  if (static_cast<int>(params.size()) != c.num_params)
    throw std::invalid_argument("parameter vector length does not match the circuit");
  const auto groups = static_cast<std::uint64_t>(trajectories);
  std::vector<std::vector<std::uint64_t>> per(groups);
#pragma omp parallel for schedule(dynamic)
  for (std::uint64_t t = 0; t < groups; ++t) {
    const std::uint64_t n_t = shots / groups + (t < shots % groups ? 1 : 0);
    if (n_t == 0) continue;
    Rng rng(seed, t);
    per[t] = run_trajectory(c, params, spec, basis, n_t, rng, readout_mask);
  }
  ShotTable table{basis, {}, shots};
  for (const auto& v : per)
    for (auto b : v) ++table.counts[b];
  return table;
}

std::array<ShotTable, 3> noisy_shots(const Circuit& c, std::span<const double> params,
                                     const NoiseSpec& spec, std::uint64_t shots, std::uint64_t seed,
                                     int trajectories) {
  std::array<ShotTable, 3> out;
  for (int b = 0; b < 3; ++b)
    out[b] = noisy_basis_shots(c, params, spec, kAllBases[b], shots,
                               derive_seed(seed, "basis", b), trajectories);
  return out;
}

Circuit pauli_twirl(const Circuit& c, std::uint64_t seed) {
  require_decomposed(c, "pauli_twirl");
  const auto& table = cz_conjugation_table();
  Rng rng(seed);
  Circuit out{c.n, {}, c.num_params, c.global_phase};
  out.gates.reserve(c.gates.size() * 2);
  auto put = [&](int p, int q) {
    if (p) out.gates.push_back({kPauliKinds[p], q, -1, std::nullopt});
  };
  for (const auto& g : c.gates) {
    if (g.kind != GateKind::CZ) {
      out.gates.push_back(g);
      continue;
    }
    const auto k = rng.uniform_int(16);
    const int p = static_cast<int>(k / 4), q = static_cast<int>(k % 4);
    const auto& conj = table[k];
    put(p, g.q0);
    put(q, g.q1);
    out.gates.push_back(g);
    put(conj.p, g.q0);
    put(conj.q, g.q1);
    // The inserted gates realize CZ / phase; compensate.
    out.global_phase += conj.phase;
  }
  out.global_phase = std::remainder(out.global_phase, 2.0 * M_PI);
  return out;
}

Circuit fold_circuit(const Circuit& c, int lambda) {
  if (lambda < 1 || lambda % 2 == 0)
    throw std::invalid_argument("noise scale factor must be an odd positive integer");
  require_decomposed(c, "fold_circuit");
  Circuit out{c.n, {}, c.num_params, c.global_phase};
  for (const auto& g : c.gates) {
    const int copies = g.kind == GateKind::CZ ? lambda : 1;
    for (int r = 0; r < copies; ++r) out.gates.push_back(g);
  }
  return out;
}

Circuit dynamical_decoupling(const Circuit& c) {
  // ASAP layering; gates within one layer act on disjoint qubits.
  std::vector<int> level(c.n, 0);
  std::vector<int> first(c.n, -1), last(c.n, -1);
  std::vector<std::vector<Gate>> layers;
  std::vector<bool> has_two_qubit;
  for (const auto& g : c.gates) {
    int lvl = level[g.q0];
    if (g.arity() == 2) lvl = std::max(lvl, level[g.q1]);
    if (static_cast<int>(layers.size()) <= lvl) {
      layers.resize(lvl + 1);
      has_two_qubit.resize(lvl + 1, false);
    }
    layers[lvl].push_back(g);
    if (g.arity() == 2) has_two_qubit[lvl] = true;
    for (int q : {g.q0, g.q1}) {
      if (q < 0) continue;
      level[q] = lvl + 1;
      if (first[q] < 0) first[q] = lvl;
      last[q] = lvl;
    }
  }
  Circuit out{c.n, {}, c.num_params, c.global_phase};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<bool> busy(c.n, false);
    for (const auto& g : layers[l]) {
      out.gates.push_back(g);
      busy[g.q0] = true;
      if (g.arity() == 2) busy[g.q1] = true;
    }
    if (!has_two_qubit[l]) continue;
    for (int q = 0; q < c.n; ++q)
      if (!busy[q] && first[q] >= 0 && first[q] < static_cast<int>(l) && last[q] > static_cast<int>(l)) {
        out.gates.push_back({GateKind::X, q, -1, std::nullopt});
        out.gates.push_back({GateKind::X, q, -1, std::nullopt});
      }
  }
  return out;
}

ReadoutCalibration calibrate_readout(int n, const NoiseSpec& spec, std::uint64_t shots_per_instance,
                                     int n_instances, std::uint64_t seed) {
  spec.validate();
  if (n_instances < 1 || shots_per_instance == 0)
    throw std::invalid_argument("calibration needs instances and shots");
  const Circuit empty{n, {}, 0, 0.0};
  std::unordered_map<std::uint64_t, std::uint64_t> hist;
  for (int k = 0; k < n_instances; ++k) {
    Rng mask_rng(derive_seed(seed, "calibration-mask", k));
    const std::uint64_t mask = random_mask(n, mask_rng);
    const auto t = noisy_basis_shots(empty, {}, spec, Basis::Z, shots_per_instance,
                                     derive_seed(seed, "calibration", k), 1, mask);
    for (const auto& [b, cnt] : t.counts) hist[b] += cnt;
  }
  ReadoutCalibration cal;
  cal.shots = shots_per_instance * static_cast<std::uint64_t>(n_instances);
  cal.factor = parity_sums(hist, n) / static_cast<double>(cal.shots);
  return cal;
}

TrexResult trex_estimate(std::span<const Circuit> instances, std::span<const double> params,
                         const NoiseSpec& spec, std::uint64_t shots_per_instance, std::uint64_t seed,
                         const ReadoutCalibration& calibration, const TrexOptions& options) {
  if (instances.size() < 2) throw std::invalid_argument("TREX needs at least two instances");
  const int n = instances.front().n;
  for (const auto& c : instances)
    if (c.n != n) throw std::invalid_argument("TREX instances differ in qubit count");
  if (calibration.factor.rows() != n) throw std::invalid_argument("calibration size mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (calibration.factor(i, j) < 0.05)
        throw UnmitigableSignal("readout attenuation " + std::to_string(calibration.factor(i, j)) +
                                " below 0.05 on (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");

  TrexResult res;
  res.n = n;
  res.calibration = calibration;
  double energy_var = 0.0;
  for (int bi = 0; bi < 3; ++bi) {
    const Basis basis = kAllBases[bi];
    std::unordered_map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const std::uint64_t idx = k * 3 + bi;
      Rng mask_rng(derive_seed(seed, "trex-mask", idx));
      const std::uint64_t mask = random_mask(n, mask_rng);
      const auto t = noisy_basis_shots(instances[k], params, spec, basis, shots_per_instance,
                                       derive_seed(seed, "trex-shots", idx), options.trajectories,
                                       mask);
      for (const auto& [b, cnt] : t.counts) hist[b] += cnt;
      total += t.shots;
    }
    res.shots += total;
    const double N = static_cast<double>(total);
    res.raw[bi] = parity_sums(hist, n) / N;
    res.parity[bi] = res.raw[bi].cwiseQuotient(calibration.factor);
    res.std_error[bi] = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double m = res.raw[bi](i, j);
        res.std_error[bi](i, j) = std::sqrt(std::max(0.0, 1.0 - m * m) / N) / calibration.factor(i, j);
      }

    if (options.hamiltonian) {
      // Per-shot corrected energy so the variance keeps term correlations.
      double sum = 0.0, sum2 = 0.0;
      for (const auto& [b, cnt] : hist) {
        double e = 0.0;
        for (const auto& t : options.hamiltonian->terms) {
          const bool odd = (((b >> t.i) ^ (b >> t.j)) & 1) != 0;
          e += (odd ? -t.weight : t.weight) / (4.0 * calibration.factor(t.i, t.j));
        }
        sum += e * cnt;
        sum2 += e * e * cnt;
      }
      const double mean = sum / N;
      res.energy.value += mean;
      if (N > 1) energy_var += std::max(0.0, (sum2 - N * mean * mean) / (N - 1)) / N;
    }
  }
  res.energy.std_error = std::sqrt(energy_var);
  return res;
}

TrexResult trex_estimate(std::span<const Circuit> instances, std::span<const double> params,
                         const NoiseSpec& spec, std::uint64_t shots_per_instance, std::uint64_t seed,
                         const TrexOptions& options) {
  if (instances.empty()) throw std::invalid_argument("TREX needs at least two instances");
  const auto cal = calibrate_readout(instances.front().n, spec, shots_per_instance,
                                     static_cast<int>(instances.size()),
                                     derive_seed(seed, "calibration"));
  return trex_estimate(instances, params, spec, shots_per_instance, seed, cal, options);
}

MitigatedEstimate zne_extrapolate(std::span<const LadderPoint> ladder) {
  if (ladder.size() < 2) throw std::invalid_argument("ZNE needs at least two ladder points");
  std::set<int> seen;
  for (const auto& p : ladder) {
    if (p.lambda < 1 || p.lambda % 2 == 0)
      throw std::invalid_argument("ZNE noise levels must be odd positive integers");
    if (!seen.insert(p.lambda).second) throw std::invalid_argument("ZNE noise levels must be distinct");
  }
  MitigatedEstimate m;
  m.ladder.assign(ladder.begin(), ladder.end());

  const bool positive = ladder.front().value > 0.0;
  bool exponential = true;
  for (const auto& p : ladder) {
    if ((p.value > 0.0) != positive || p.value == 0.0) exponential = false;
    if (std::abs(p.value) < 10.0 * p.std_error) exponential = false;
  }
  std::vector<double> x, y;
  for (const auto& p : ladder) {
    x.push_back(p.lambda);
    y.push_back(exponential ? std::log(std::abs(p.value)) : p.value);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  if (exponential) {
    m.o0 = (positive ? 1.0 : -1.0) * std::exp(intercept);
    m.a = slope;
    m.value = m.o0;
  } else {
    m.fallback_used = true;
    m.o0 = intercept;
    m.a = slope;
    m.value = intercept;
  }
  return m;
}

MitigatedEstimate mitigated_energy(const Circuit& c, std::span<const double> params,
                                   const HamiltonianTerms& h, const NoiseSpec& spec,
                                   std::uint64_t seed, const MitigationOptions& opt) {
  if (opt.ladder.empty()) throw std::invalid_argument("empty noise ladder");
  const Circuit base = is_decomposed(c) ? c : decompose(c);
  ReadoutCalibration cal;
  try {
    cal = calibrate_readout(base.n, spec, opt.shots, opt.twirl_instances,
                            derive_seed(seed, "calibration"));
  } catch (const std::exception& e) {
    throw MitigationError("calibration", e.what());
  }

  std::vector<LadderPoint> ladder;
  std::uint64_t shots = 0;
  for (int lambda : opt.ladder) {
    std::vector<Circuit> instances;
    try {
      const Circuit folded = fold_circuit(base, lambda);
      for (int k = 0; k < opt.twirl_instances; ++k)
        instances.push_back(pauli_twirl(folded, derive_seed(seed, "twirl", lambda * 1000 + k)));
    } catch (const std::invalid_argument& e) {
      throw MitigationError("folding/twirling", e.what());
    }
    TrexOptions topt;
    topt.trajectories = opt.trajectories;
    topt.hamiltonian = &h;
    TrexResult tr;
    try {
      tr = trex_estimate(instances, params, spec, opt.shots, derive_seed(seed, "trex", lambda), cal,
                         topt);
    } catch (const UnmitigableSignal&) {
      throw;
    } catch (const std::exception& e) {
      throw MitigationError("trex", e.what());
    }
    shots += tr.shots;
    ladder.push_back({lambda, tr.energy.value, tr.energy.std_error});
  }

  MitigatedEstimate m;
  try {
    m = ladder.size() >= 2 ? zne_extrapolate(ladder) : MitigatedEstimate{};
  } catch (const std::invalid_argument& e) {
    throw MitigationError("zne", e.what());
  }
  if (ladder.size() == 1) {
    m.ladder = ladder;
    m.value = ladder[0].value;
    m.std_error = ladder[0].std_error;
  } else if (opt.bootstrap_resamples > 1) {
    Rng rng(derive_seed(seed, "bootstrap"));
    double mean = 0.0, m2 = 0.0;
    std::vector<LadderPoint> resampled = ladder;
    for (int r = 0; r < opt.bootstrap_resamples; ++r) {
      for (std::size_t i = 0; i < ladder.size(); ++i)
        resampled[i].value = ladder[i].value + ladder[i].std_error * rng.normal();
      const double v = zne_extrapolate(resampled).value;
      const double d = v - mean;
      mean += d / (r + 1);
      m2 += d * (v - mean);
    }
    m.std_error = std::sqrt(m2 / (opt.bootstrap_resamples - 1));
  }
  m.shots = shots;
  m.calibration_shots = cal.shots;
  return m;
}

EnergyEstimate unmitigated_energy(const Circuit& c, std::span<const double> params,
                                  const HamiltonianTerms& h, const NoiseSpec& spec,
                                  std::uint64_t shots, std::uint64_t seed, int trajectories) {
  const Circuit base = is_decomposed(c) ? c : decompose(c);
  const auto tables = noisy_shots(base, params, spec, shots, seed, trajectories);
  return energy_from_shots(tables, h);
}

Eigen::MatrixXd mitigated_correlations(const Circuit& c, std::span<const double> params,
                                       const NoiseSpec& spec, std::uint64_t seed,
                                       const MitigationOptions& opt) {
  const Circuit base = is_decomposed(c) ? c : decompose(c);
  std::vector<Circuit> instances;
  for (int k = 0; k < opt.twirl_instances; ++k)
    instances.push_back(pauli_twirl(base, derive_seed(seed, "twirl", 1000 + k)));
  TrexOptions topt;
  topt.trajectories = opt.trajectories;
  const auto tr = trex_estimate(instances, params, spec, opt.shots, seed, topt);
  Eigen::MatrixXd corr = tr.parity[0] + tr.parity[1] + tr.parity[2];
  for (int i = 0; i < base.n; ++i) corr(i, i) = 3.0;
  return corr;
}

void write_mitigated(std::ostream& out, const MitigatedEstimate& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "value %.17g\nstd_error %.17g\n", m.value, m.std_error);
  out << buf;
  std::snprintf(buf, sizeof buf, "fit o0 %.17g a %.17g\n", m.o0, m.a);
  out << buf << "fallback " << (m.fallback_used ? 1 : 0) << '\n';
  for (const auto& p : m.ladder) {
    std::snprintf(buf, sizeof buf, "ladder %d %.17g %.17g\n", p.lambda, p.value, p.std_error);
    out << buf;
  }
  out << "shots " << m.shots << " calibration_shots " << m.calibration_shots << '\n';
}

}  // namespace ecba
