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

#include "ecba/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ecba/rg_flow.hpp"
#include "ecba/rng.hpp"
#include "ecba/statevector.hpp"

namespace ecba {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Correction {
  std::vector<double> s, y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> lbfgs_direction(const std::deque<Correction>& mem,
                                    std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * mem[k].y[i];
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& x : q) x *= gamma;
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * mem[k].s[i];
  }
  for (double& x : q) x = -x;
  return q;
}

}  // namespace

ValueAndGradient energy_and_gradient(const Circuit& c, std::span<const double> params,
                                     const HamiltonianTerms& h) {
  QuantumState psi = run(c, params);
  QuantumState lambda = apply_hamiltonian(psi, h);
  ValueAndGradient out;
  out.value = inner_product(psi, lambda).real();
  out.gradient.assign(c.num_params, 0.0);
  // With psi_k the state after gate k and lambda_k = U_{k+1}^+ ... U_N^+ H psi,
  // dE/dtheta_k = Im <lambda_k| P_k |psi_k> for U_k = exp(-i theta_k P_k / 2).
  for (std::size_t k = c.gates.size(); k-- > 0;) {
    const Gate& g = c.gates[k];
    if (g.param) out.gradient[*g.param] = generator_overlap(lambda, psi, g).imag();
    if (k == 0) break;
    apply_gate_inverse(psi, g, params);
    apply_gate_inverse(lambda, g, params);
  }
  return out;
}

std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const HamiltonianTerms& h) {
  return energy_and_gradient(c, params, h).gradient;
}

VqeResult minimize(const Circuit& c, const HamiltonianTerms& h, std::uint64_t init_seed,
                   const MinimizeOptions& options) {
  Rng rng(init_seed);
  std::vector<double> x(c.num_params);
  for (double& v : x) v = options.init_low + (options.init_high - options.init_low) * rng.uniform();
  return minimize_from(c, h, std::move(x), options);
}

VqeResult minimize_from(const Circuit& c, const HamiltonianTerms& h, std::vector<double> x,
                        const MinimizeOptions& options) {
  if (static_cast<int>(x.size()) != c.num_params)
    throw std::invalid_argument("start vector length does not match the circuit");
  constexpr double kArmijo = 1e-4;
  constexpr double kCurvature = 0.9;
  constexpr int kMaxLineSteps = 60;

  VqeResult r;
  auto fg = energy_and_gradient(c, x, h);
  r.evaluations = 1;
  r.history.push_back(fg.value);
  std::deque<Correction> mem;

  if (c.num_params == 0) {
    r.best_params = x;
    r.best_energy = fg.value;
    r.converged = true;
    return r;
  }

  while (r.iterations < options.max_iters) {
    if (max_abs(fg.gradient) < options.gtol) {
      r.converged = true;
      break;
    }
    std::vector<double> d = lbfgs_direction(mem, fg.gradient);
    double slope = dot(fg.gradient, d);
    if (!(slope < 0.0)) {
      mem.clear();
      d = lbfgs_direction(mem, fg.gradient);
      slope = dot(fg.gradient, d);
    }
    double t = mem.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(d, d))) : 1.0;

    // Weak Wolfe search by bracketing: expand while the curvature condition
    // fails, bisect once sufficient decrease fails.
    bool accepted = false;
    std::vector<double> x_new(x.size());
    ValueAndGradient fg_new;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    std::vector<double> x_lo;
    ValueAndGradient fg_lo;
    for (int k = 0; k < kMaxLineSteps; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] + t * d[i];
      fg_new = energy_and_gradient(c, x_new, h);
      ++r.evaluations;
      if (!(fg_new.value <= fg.value + kArmijo * t * slope)) {
        hi = t;
      } else if (dot(fg_new.gradient, d) < kCurvature * slope) {
        lo = t;
        x_lo = x_new;
        fg_lo = fg_new;
      } else {
        accepted = true;
        break;
      }
      t = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
    }
    if (!accepted && lo > 0.0) {
      x_new = std::move(x_lo);
      fg_new = std::move(fg_lo);
      accepted = true;
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      // No descent possible along -g at machine precision.
      r.converged = true;
      break;
    }

    ++r.iterations;
    Correction corr{std::vector<double>(x.size()), std::vector<double>(x.size()), 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      corr.s[i] = x_new[i] - x[i];
      corr.y[i] = fg_new.gradient[i] - fg.gradient[i];
    }
    const double sy = dot(corr.s, corr.y);
    if (sy > 1e-12 * std::sqrt(dot(corr.y, corr.y) * dot(corr.s, corr.s))) {
      corr.rho = 1.0 / sy;
      mem.push_back(std::move(corr));
      if (static_cast<int>(mem.size()) > options.memory) mem.pop_front();
    }
    const double change = fg.value - fg_new.value;
    x = std::move(x_new);
    fg = std::move(fg_new);
    r.history.push_back(fg.value);
    if (change < options.tol) {
      r.converged = true;
      break;
    }
  }
  r.best_params = x;
  r.best_energy = fg.value;
  return r;
}

const char* family_name(AnsatzFamily f) { return f == AnsatzFamily::ECBA ? "ECBA" : "HEA"; }

Circuit build_random_chain_ansatz(AnsatzFamily family, const CouplingRealization& real) {
  return family == AnsatzFamily::ECBA ? build_ecba(make_plan(real)) : build_hea_random(real.n);
}

const char* init_range_name(InitRange r) { return r == InitRange::Small ? "small" : "full"; }

GradientVarianceReport gradient_variance(const Circuit& c, const HamiltonianTerms& h,
                                         int num_samples, std::uint64_t seed, InitRange mode) {
  if (num_samples < 30) throw std::invalid_argument("gradient variance needs at least 30 samples");
  const double hi = mode == InitRange::Small ? 0.05 : 2.0 * std::numbers::pi;
  const std::size_t p = c.num_params;
  std::vector<double> mean(p, 0.0), m2(p, 0.0);
  std::vector<double> x(p);
  for (int s = 0; s < num_samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    for (double& v : x) v = hi * rng.uniform();
    const auto g = gradient(c, x, h);
    // Welford update.
    for (std::size_t k = 0; k < p; ++k) {
      const double delta = g[k] - mean[k];
      mean[k] += delta / (s + 1);
      m2[k] += delta * (g[k] - mean[k]);
    }
  }
  GradientVarianceReport rep;
  rep.n = c.n;
  rep.samples = num_samples;
  rep.mode = mode;
  rep.per_component_variance.resize(p);
  for (std::size_t k = 0; k < p; ++k) rep.per_component_variance[k] = m2[k] / (num_samples - 1);
  rep.mean_variance = p ? std::accumulate(rep.per_component_variance.begin(),
                                          rep.per_component_variance.end(), 0.0) / p
                        : 0.0;
  return rep;
}

GradientVarianceReport gradient_variance(AnsatzFamily family, const CouplingRealization& real,
                                         int num_samples, std::uint64_t seed, InitRange mode) {
  return gradient_variance(build_random_chain_ansatz(family, real), chain_terms(real),
                           num_samples, seed, mode);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("line fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct x values");
  LineFit f;
  f.points = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.slope_std_error = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

void write_vqe_result(std::ostream& out, const VqeResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", r.best_energy);
  out << "energy " << buf << '\n'
      << "iterations " << r.iterations << '\n'
      << "converged " << (r.converged ? 1 : 0) << '\n'
      << "params " << r.best_params.size() << '\n';
  for (double p : r.best_params) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << buf << '\n';
  }
}

VqeResult read_vqe_result(std::istream& in) {
  VqeResult r;
  std::string tag;
  int conv = 0;
  std::size_t count = 0;
  if (!(in >> tag >> r.best_energy) || tag != "energy" || !(in >> tag >> r.iterations) ||
      tag != "iterations" || !(in >> tag >> conv) || tag != "converged" ||
      !(in >> tag >> count) || tag != "params")
    throw std::runtime_error("VQE record: malformed header");
  r.converged = conv != 0;
  r.best_params.resize(count);
  for (auto& p : r.best_params)
    if (!(in >> p)) throw std::runtime_error("VQE record: missing parameter");
  return r;
}

}  // namespace ecba
