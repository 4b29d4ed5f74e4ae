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

#include "ecba/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "ecba/rng.hpp"

namespace ecba {
namespace {

// Basis states of the chosen sector plus the inverse lookup table.
struct Sector {
  int n = 0;
  bool full = true;
  std::vector<std::uint32_t> states;
  std::vector<std::uint32_t> index;  // only filled for restricted sectors

  std::size_t dim() const { return full ? (std::size_t{1} << n) : states.size(); }
  std::uint32_t state(std::size_t k) const { return full ? static_cast<std::uint32_t>(k) : states[k]; }
  std::size_t find(std::uint32_t b) const { return full ? b : index[b]; }
};

Sector make_sector(int n, bool zero_spin) {
  Sector s;
  s.n = n;
  s.full = !zero_spin;
  if (zero_spin) {
    const std::uint32_t total = std::uint32_t{1} << n;
    s.index.assign(total, 0);
    for (std::uint32_t b = 0; b < total; ++b)
      if (std::popcount(b) == n / 2) {
        s.index[b] = static_cast<std::uint32_t>(s.states.size());
        s.states.push_back(b);
      }
  }
  return s;
}

void matvec(const Sector& sec, const HamiltonianTerms& h, const std::vector<double>& x,
            std::vector<double>& y) {
  const std::size_t dim = sec.dim();
#pragma omp parallel for if (dim >= (std::size_t{1} << 14))
  for (std::size_t k = 0; k < dim; ++k) {
    const std::uint32_t b = sec.state(k);
    double acc = 0.0;
    for (const auto& t : h.terms) {
      const std::uint32_t mi = std::uint32_t{1} << t.i, mj = std::uint32_t{1} << t.j;
      const double w = t.weight / 4.0;
      if (((b & mi) != 0) == ((b & mj) != 0)) {
        acc += w * x[k];
      } else {
        acc += -w * x[k] + 2.0 * w * x[sec.find(b ^ mi ^ mj)];
      }
    }
    y[k] = acc;
  }
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

OracleResult ground_state(const HamiltonianTerms& h, const OracleOptions& opt) {
  if (h.n < 1 || h.n > kOracleMaxQubits)
    throw std::invalid_argument("exact oracle supports 1 <= n <= 24");
  h.validate();
  bool zero_spin = false;
  switch (opt.sector) {
    case SectorChoice::Full: break;
    case SectorChoice::ZeroSpin:
      if (h.n % 2 != 0) throw std::invalid_argument("S^z = 0 sector needs even n");
      zero_spin = true;
      break;
    case SectorChoice::Auto:
      zero_spin = h.n % 2 == 0 &&
                  std::all_of(h.terms.begin(), h.terms.end(), [](const auto& t) { return t.weight > 0; });
      break;
  }
  const Sector sec = make_sector(h.n, zero_spin);
  const std::size_t dim = sec.dim();

  OracleResult res;
  res.sector_dim = dim;

  std::vector<double> y(dim), v(dim);
  if (dim == 1) {
    v[0] = 1.0;
    matvec(sec, h, v, y);
    res.ground_energy = y[0];
    res.matvecs = 1;
  } else {
    const std::size_t by_memory = opt.memory_budget_bytes / (dim * sizeof(double));
    const int cap = static_cast<int>(std::clamp<std::size_t>(
        std::min<std::size_t>(by_memory, static_cast<std::size_t>(opt.krylov_cap)), 8,
        std::max<std::size_t>(dim, 8)));
    const int m_max = std::min<int>(cap, static_cast<int>(dim));

    Rng rng(opt.seed);
    for (double& x : v) x = rng.uniform() - 0.5;
    double nv = std::sqrt(dotv(v, v));
    for (double& x : v) x /= nv;

    std::vector<std::vector<double>> basis;
    double theta = 0.0;
    bool done = false;
    for (int restart = 0; restart <= opt.max_restarts && !done; ++restart) {
      basis.clear();
      basis.push_back(v);
      std::vector<double> alpha, beta;
      Eigen::VectorXd ritz;
      for (int j = 0; j < m_max; ++j) {
        std::vector<double> w(dim);
        matvec(sec, h, basis[j], w);
        ++res.matvecs;
        alpha.push_back(dotv(basis[j], w));
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& q : basis) axpy(-dotv(q, w), q, w);
        const double b = std::sqrt(dotv(w, w));
        const int m = j + 1;
        const bool last = m == m_max || b < 1e-13;
        if (m % 5 == 0 || last) {
          Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
          for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
          }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
          theta = es.eigenvalues()(0);
          ritz = es.eigenvectors().col(0);
          if (last || b * std::abs(ritz(m - 1)) < 0.1 * opt.tolerance) break;
        }
        beta.push_back(b);
        for (double& x : w) x /= b;
        basis.push_back(std::move(w));
      }
      std::fill(v.begin(), v.end(), 0.0);
      for (int i = 0; i < ritz.size(); ++i) axpy(ritz(i), basis[i], v);
      nv = std::sqrt(dotv(v, v));
      for (double& x : v) x /= nv;
      matvec(sec, h, v, y);
      ++res.matvecs;
      theta = dotv(v, y);
      axpy(-theta, v, y);
      res.residual = std::sqrt(dotv(y, y));
      done = res.residual < opt.tolerance;
    }
    res.ground_energy = theta;
    if (!done)
      throw OracleError("Lanczos did not reach the residual target (residual " +
                        std::to_string(res.residual) + ")");
  }

  if (opt.keep_state && h.n <= QuantumState::kMaxQubits) {
    QuantumState st(h.n);
    auto amps = st.amplitudes();
    std::fill(amps.begin(), amps.end(), Complex{});
    for (std::size_t k = 0; k < dim; ++k) amps[sec.state(k)] = v[k];
    res.ground_state = std::move(st);
  }
  return res;
}

Eigen::MatrixXd exact_correlations(const OracleResult& result) {
  if (!result.ground_state) throw OracleError("oracle result carries no ground state");
  return correlation_matrix(*result.ground_state);
}

void write_oracle_result(std::ostream& out, const OracleResult& r) {
  char e[64], res[64];
  std::snprintf(e, sizeof e, "%.17g", r.ground_energy);
  std::snprintf(res, sizeof res, "%.3e", r.residual);
  out << "E " << e << " residual " << res << '\n';
}

}  // namespace ecba
