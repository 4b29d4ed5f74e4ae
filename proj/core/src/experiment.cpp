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

#include "ecba/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "ecba/lattice.hpp"
#include "ecba/oracle.hpp"
#include "ecba/rg_flow.hpp"
#include "ecba/rng.hpp"
#include "ecba/statevector.hpp"
#include "ecba/vqe.hpp"

namespace ecba {
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used, 0);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected an integer, got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected on/off, got '" + v + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model", "n", "delta", "alpha", "j", "ansatz", "seed", "noise", "noise.p_cz",
      "noise.p_1q", "noise.p_readout", "mitigation", "shots", "mitigation.twirls",
      "mitigation.ladder", "mitigation.trajectories", "mitigation.bootstrap", "vqe.tol",
      "vqe.gtol", "vqe.max_iters", "topology", "embed.mode", "embed.budget",
      "feasibility.samples", "output", "scan.n", "scan.delta", "scan.ansatz",
      "scan.repetitions", "scan.grad_samples", "scan.wall_time", "check.max_relative_error",
      "check.min_relative_accuracy"};
  return keys;
}

std::string read_artifact(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw StageError("missing upstream artifact " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_artifact(const fs::path& p, const std::string& text) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw StageError("cannot write " + p.string());
    f << text;
  }
  fs::rename(tmp, p);
}

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Pipeline context for one command invocation.
class Stage {
 public:
  Stage(std::string name, const ExperimentConfig& cfg, std::ostream& log)
      : name_(std::move(name)), cfg_(cfg), log_(log) {
    fs::create_directories(cfg.output);
    seed_ = derive_seed(cfg.seed, name_);
    note("start");
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t seed(std::string_view label) const { return derive_seed(cfg_.seed, label); }

  std::string input(const std::string& file) {
    const std::string text = read_artifact(cfg_.output / file);
    inputs_.emplace_back(file, fnv1a64(text));
    return text;
  }
  void output(const std::string& file, const std::string& text) {
    write_artifact(cfg_.output / file, text);
    outputs_.push_back(file);
  }
  void note(const std::string& msg) {
    log_ << "[" << name_ << "] " << msg << '\n';
    std::ofstream f(cfg_.output / "run.log", std::ios::app);
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    f << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << name_ << ' ' << msg << '\n';
  }

  // Replaces this stage's line in manifest.txt.
  void finish() {
    std::ostringstream line;
    line << "stage " << name_ << " seed " << hex64(seed_) << " config " << hex64(cfg_hash());
    line << " inputs";
    for (const auto& [f, h] : inputs_) line << ' ' << f << '=' << hex64(h);
    line << " outputs";
    for (const auto& f : outputs_) line << ' ' << f;
    std::map<std::string, std::string> stages;
    std::ifstream in(cfg_.output / "manifest.txt");
    std::string l;
    while (std::getline(in, l)) {
      std::istringstream ls(l);
      std::string tag, stage;
      if (ls >> tag >> stage && tag == "stage") stages[stage] = l;
    }
    stages[name_] = line.str();
    std::string text = "top_seed " + std::to_string(cfg_.seed) + "\n";
    for (const auto& [k, v] : stages) text += v + "\n";
    write_artifact(cfg_.output / "manifest.txt", text);
    note("done");
  }

 private:
  std::uint64_t cfg_hash() const {
    std::ostringstream ss;
    ss << model_name(cfg_.model) << ' ' << cfg_.n << ' ' << fmt(cfg_.delta) << ' '
       << ansatz_name(cfg_.ansatz) << ' ' << cfg_.seed;
    return fnv1a64(ss.str());
  }

  std::string name_;
  const ExperimentConfig& cfg_;
  std::ostream& log_;
  std::uint64_t seed_;
  std::vector<std::pair<std::string, std::uint64_t>> inputs_;
  std::vector<std::string> outputs_;
};

template <class F>
auto parse_with(const std::string& text, F f) {
  std::istringstream in(text);
  return f(in);
}

std::string format_terms(const HamiltonianTerms& h) {
  std::ostringstream out;
  out << "n " << h.n << '\n';
  for (const auto& t : h.terms) out << t.i << ' ' << t.j << ' ' << fmt(t.weight) << '\n';
  return out.str();
}

HamiltonianTerms load_hamiltonian(Stage& st, const ExperimentConfig& cfg) {
  if (cfg.model == Model::Rainbow) return rainbow_terms(cfg.rainbow);
  return chain_terms(parse_realization(st.input("realization.txt")));
}

Circuit build_circuit(Stage& st, const ExperimentConfig& cfg) {
  switch (cfg.ansatz) {
    case Ansatz::CBA:
      return build_rainbow_cba(cfg.rainbow);
    case Ansatz::HEA:
      return cfg.model == Model::Rainbow ? build_rainbow_hea(cfg.rainbow) : build_hea_random(cfg.n);
    case Ansatz::ECBA: {
      const auto real = parse_realization(st.input("realization.txt"));
      const auto plan = parse_with(st.input("pairing.txt"),
                                   [&](std::istream& in) { return read_plan(in, real); });
      check_plan(plan);
      return build_ecba(plan);
    }
  }
  throw StageError("unknown ansatz");
}

struct Optimized {
  Circuit circuit;
  VqeResult vqe;
};

Optimized load_optimized(Stage& st) {
  Optimized o;
  o.circuit = parse_circuit(st.input("circuit.txt"));
  o.vqe = parse_with(st.input("vqe.txt"), [](std::istream& in) { return read_vqe_result(in); });
  if (static_cast<int>(o.vqe.best_params.size()) != o.circuit.num_params)
    throw StageError("vqe.txt does not match circuit.txt; rerun optimize");
  return o;
}

std::optional<double> exact_energy(const HamiltonianTerms& h) {
  if (h.n > kOracleMaxQubits) return std::nullopt;
  OracleOptions opt;
  opt.keep_state = false;
  return ground_state(h, opt).ground_energy;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_sample(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("sample", cfg, log);
  HamiltonianTerms h;
  if (cfg.model == Model::RandomChain) {
    const auto real = sample_couplings(cfg.n, cfg.delta, st.seed());
    st.output("realization.txt", format_realization(real));
    h = chain_terms(real);
  } else {
    h = rainbow_terms(cfg.rainbow);
  }
  st.output("hamiltonian.txt", format_terms(h));
  st.finish();
  return kExitOk;
}

int cmd_rg(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.model != Model::RandomChain) throw ConfigError("model", "rg needs model=random-chain");
  Stage st("rg", cfg, log);
  const auto plan = make_plan(parse_realization(st.input("realization.txt")));
  check_plan(plan);
  std::ostringstream out;
  write_plan(out, plan);
  st.output("pairing.txt", out.str());
  st.finish();
  return kExitOk;
}

int cmd_build(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("build", cfg, log);
  const Circuit c = build_circuit(st, cfg);
  c.validate();
  st.output("circuit.txt", format_circuit(c));
  const auto r = resources(c);
  st.output("resources.txt", "cz " + std::to_string(r.cz_count) + "\ndepth " +
                                 std::to_string(r.depth) + "\nparams " +
                                 std::to_string(r.num_params) + "\n");
  st.note("cz=" + std::to_string(r.cz_count) + " params=" + std::to_string(r.num_params));
  st.finish();
  return kExitOk;
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("optimize", cfg, log);
  const Circuit c = parse_circuit(st.input("circuit.txt"));
  const auto h = load_hamiltonian(st, cfg);
  if (h.n != c.n) throw StageError("circuit.txt and Hamiltonian disagree on n");
  const auto res = minimize(c, h, st.seed(), cfg.vqe);
  std::ostringstream out;
  write_vqe_result(out, res);
  st.output("vqe.txt", out.str());
  st.note("E=" + fmt(res.best_energy) + " iterations=" + std::to_string(res.iterations));
  st.finish();
  return kExitOk;
}

int cmd_run_ideal(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("run-ideal", cfg, log);
  const auto o = load_optimized(st);
  const auto h = load_hamiltonian(st, cfg);
  const double e = energy(run(o.circuit, o.vqe.best_params), h);
  const auto exact = exact_energy(h);
  std::ostringstream out;
  out << "n,model,ansatz,E_vqe,E_exact,relative_error,relative_accuracy\n";
  out << h.n << ',' << model_name(cfg.model) << ',' << ansatz_name(cfg.ansatz) << ',' << fmt(e)
      << ',';
  int code = kExitOk;
  if (exact) {
    const double err = relative_error(*exact, e);
    out << fmt(*exact) << ',' << fmt(err) << ',' << fmt(relative_accuracy(*exact, e).accuracy)
        << '\n';
    if (cfg.check_max_relative_error && !(err <= *cfg.check_max_relative_error)) {
      st.note("relative error " + fmt(err) + " above check.max_relative_error");
      code = kExitThreshold;
    }
  } else {
    out << ",,\n";
  }
  st.output("ideal.csv", out.str());
  st.finish();
  return code;
}

int cmd_run_noisy(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.noise) throw ConfigError("noise", "run-noisy needs a noise model");
  Stage st("run-noisy", cfg, log);
  const auto o = load_optimized(st);
  const auto h = load_hamiltonian(st, cfg);
  double value, se;
  if (cfg.mitigation) {
    const auto m = mitigated_energy(o.circuit, o.vqe.best_params, h, *cfg.noise, st.seed(),
                                    cfg.mitigation_options);
    std::ostringstream mt;
    write_mitigated(mt, m);
    st.output("mitigated.txt", mt.str());
    value = m.value;
    se = m.std_error;
  } else {
    const auto e = unmitigated_energy(o.circuit, o.vqe.best_params, h, *cfg.noise, cfg.shots,
                                      st.seed(), cfg.mitigation_options.trajectories);
    value = e.value;
    se = e.std_error;
  }
  const auto exact = exact_energy(h);
  std::ostringstream out;
  out << "n,model,ansatz,mitigation,E_noisy,std_error,E_exact,relative_accuracy\n";
  out << h.n << ',' << model_name(cfg.model) << ',' << ansatz_name(cfg.ansatz) << ','
      << (cfg.mitigation ? "on" : "off") << ',' << fmt(value) << ',' << fmt(se) << ',';
  int code = kExitOk;
  if (exact) {
    const double acc = relative_accuracy(*exact, value).accuracy;
    out << fmt(*exact) << ',' << fmt(acc) << '\n';
    if (cfg.check_min_relative_accuracy && !(acc >= *cfg.check_min_relative_accuracy)) {
      st.note("relative accuracy " + fmt(acc) + " below check.min_relative_accuracy");
      code = kExitThreshold;
    }
  } else {
    out << ",\n";
  }
  st.output("noisy.csv", out.str());
  st.finish();
  return code;
}

int cmd_embed(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.topology.empty()) throw ConfigError("topology", "embed needs a topology file");
  Topology topo;
  try {
    topo = load_topology(cfg.topology);
  } catch (const std::exception& e) {
    throw ConfigError("topology", e.what());
  }
  const EmbedMode mode = parse_mode(cfg.embed_mode);
  Stage st("embed", cfg, log);
  std::vector<SitePair> graph;
  if (cfg.model == Model::RandomChain) {
    graph = embedding_graph(parse_realization(st.input("realization.txt")), mode);
  } else {
    for (const auto& t : rainbow_terms(cfg.rainbow).terms) graph.push_back({t.i, t.j});
  }
  int code = kExitOk;
  const auto r = embed(cfg.n, graph, topo, cfg.embed_budget);
  st.note(std::string("single instance: ") + status_name(r.status));
  if (r.status == EmbedStatus::Found) {
    std::ostringstream out;
    write_embedding(out, r.map);
    st.output("embedding.txt", out.str());
  } else {
    code = kExitStage;
  }
  if (cfg.feasibility_samples > 0) {
    const auto rep = feasibility_study(cfg.n, cfg.delta, cfg.feasibility_samples, topo,
                                       st.seed("feasibility"), mode, cfg.embed_budget);
    std::ostringstream out;
    write_feasibility_csv(out, rep);
    st.output("feasibility.csv", out.str());
    st.note("feasibility found=" + std::to_string(rep.found) +
            " infeasible=" + std::to_string(rep.infeasible) +
            " timeout=" + std::to_string(rep.timeout));
    if (rep.found != rep.samples() && code == kExitOk) code = kExitThreshold;
  }
  st.finish();
  return code;
}

int cmd_scan(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("scan", cfg, log);
  const auto rows = run_scan(cfg);
  std::ostringstream out;
  write_scan_csv(out, rows);
  std::string text = out.str();
  st.output("scan.csv", text);
  int code = kExitOk;
  if (cfg.check_max_relative_error) {
    std::vector<double> errs;
    for (const auto& r : rows)
      if (r.ansatz == Ansatz::ECBA && r.e_exact) errs.push_back(relative_error(*r.e_exact, r.e_vqe));
    if (!errs.empty() && !(median(errs) <= *cfg.check_max_relative_error)) {
      st.note("median ECBA relative error " + fmt(median(errs)) + " above threshold");
      code = kExitThreshold;
    }
  }
  st.finish();
  return code;
}

int cmd_report(const ExperimentConfig& cfg, std::ostream& log) {
  Stage st("report", cfg, log);
  const auto o = load_optimized(st);
  const auto h = load_hamiltonian(st, cfg);
  const Eigen::MatrixXd c_vqe = correlation_matrix(run(o.circuit, o.vqe.best_params));
  std::optional<Eigen::MatrixXd> c_exact, c_noisy;
  if (h.n <= kOracleMaxQubits) c_exact = exact_correlations(ground_state(h));
  if (cfg.noise)
    c_noisy = mitigated_correlations(o.circuit, o.vqe.best_params, *cfg.noise, st.seed(),
                                     cfg.mitigation_options);
  std::set<SitePair> rg;
  if (cfg.model == Model::RandomChain) {
    const auto real = parse_realization(st.input("realization.txt"));
    for (auto [a, b] : rg_pairing(real)) rg.insert({std::min(a, b), std::max(a, b)});
  }
  std::ostringstream out;
  out << "i,j,C_vqe,C_exact,C_mitigated,rg_pair\n";
  for (int i = 0; i < h.n; ++i)
    for (int j = 0; j < h.n; ++j) {
      out << i << ',' << j << ',' << fmt(c_vqe(i, j)) << ',';
      if (c_exact) out << fmt((*c_exact)(i, j));
      out << ',';
      if (c_noisy) out << fmt((*c_noisy)(i, j));
      out << ',' << (rg.count({std::min(i, j), std::max(i, j)}) ? 1 : 0) << '\n';
    }
  st.output("correlations.csv", out.str());
  const auto& source = c_noisy ? *c_noisy : c_vqe;
  std::string w;
  for (auto [a, b] : witness_pairs(source)) w += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
  st.note("witness pairs:" + w);
  st.finish();
  return kExitOk;
}

}  // namespace

Config Config::load(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream text;
  text << f.rdbuf();
  Config c;
  c.parse_into(text.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path(),
               0);
  return c;
}

Config Config::parse(const std::string& text, const fs::path& base_dir) {
  Config c;
  c.parse_into(text, base_dir, 0);
  return c;
}

void Config::parse_into(const std::string& text, const fs::path& base_dir, int depth) {
  if (depth > 16) throw ConfigError("include", "include nesting too deep");
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("include ", 0) == 0) {
      const fs::path p = base_dir / trim(line.substr(8));
      std::string sub;
      try {
        sub = read_artifact(p);
      } catch (const StageError&) {
        throw ConfigError("include", "cannot read " + p.string());
      }
      parse_into(sub, p.parent_path(), depth + 1);
      continue;
    }
    if (line.find('=') == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    set(line);
  }
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must look like key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError(assignment, "empty key");
  values_[key] = trim(assignment.substr(eq + 1));
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

const char* model_name(Model m) { return m == Model::Rainbow ? "rainbow" : "random-chain"; }

const char* ansatz_name(Ansatz a) {
  switch (a) {
    case Ansatz::ECBA: return "ECBA";
    case Ansatz::HEA: return "HEA";
    case Ansatz::CBA: return "CBA";
  }
  return "?";
}

Ansatz parse_ansatz(const std::string& s) {
  if (s == "ECBA" || s == "ecba") return Ansatz::ECBA;
  if (s == "HEA" || s == "hea") return Ansatz::HEA;
  if (s == "CBA" || s == "cba") return Ansatz::CBA;
  throw ConfigError("ansatz", "unknown ansatz '" + s + "' (expected ECBA, HEA or CBA)");
}

ExperimentConfig interpret(const Config& c) {
  for (const auto& [k, v] : c.values())
    if (!known_keys().count(k)) throw ConfigError(k, "unknown key");
  ExperimentConfig e;
  const std::string model = c.get("model", "random-chain");
  if (model == "random-chain") e.model = Model::RandomChain;
  else if (model == "rainbow") e.model = Model::Rainbow;
  else throw ConfigError("model", "expected random-chain or rainbow, got '" + model + "'");

  auto geti = [&](const std::string& k, long long def) {
    return c.has(k) ? to_int(k, c.get(k, "")) : def;
  };
  auto getd = [&](const std::string& k, double def) {
    return c.has(k) ? to_double(k, c.get(k, "")) : def;
  };

  e.n = static_cast<int>(geti("n", 10));
  if (e.n < 2 || e.n % 2) throw ConfigError("n", "must be an even integer >= 2");
  e.seed = static_cast<std::uint64_t>(geti("seed", 1));
  e.ansatz = parse_ansatz(c.get("ansatz", e.model == Model::Rainbow ? "CBA" : "ECBA"));
  if (e.model == Model::RandomChain) {
    if (c.has("alpha")) throw ConfigError("alpha", "only valid with model=rainbow");
    if (c.has("j")) throw ConfigError("j", "only valid with model=rainbow");
    e.delta = getd("delta", 1.0);
    if (!(e.delta >= 1.0)) throw ConfigError("delta", "must be >= 1");
    if (e.ansatz == Ansatz::CBA) throw ConfigError("ansatz", "CBA requires model=rainbow");
  } else {
    if (c.has("delta")) throw ConfigError("delta", "only valid with model=random-chain");
    e.rainbow = {e.n, getd("alpha", 1.0), getd("j", 100.0)};
    if (!(e.rainbow.alpha > 0.0)) throw ConfigError("alpha", "must be positive");
    if (!(e.rainbow.j > 0.0)) throw ConfigError("j", "must be positive");
    if (e.ansatz == Ansatz::ECBA) throw ConfigError("ansatz", "ECBA requires model=random-chain");
  }

  const std::string noise = c.get("noise", "none");
  if (noise == "default" || noise == "custom") {
    NoiseSpec ns;
    ns.p_cz = getd("noise.p_cz", ns.p_cz);
    ns.p_1q = getd("noise.p_1q", ns.p_1q);
    ns.p_readout = getd("noise.p_readout", ns.p_readout);
    if (!(ns.p_cz >= 0.0 && ns.p_cz < 0.5)) throw ConfigError("noise.p_cz", "must lie in [0, 0.5)");
    if (!(ns.p_1q >= 0.0 && ns.p_1q < 0.5)) throw ConfigError("noise.p_1q", "must lie in [0, 0.5)");
    if (!(ns.p_readout >= 0.0 && ns.p_readout < 0.5))
      throw ConfigError("noise.p_readout", "must lie in [0, 0.5)");
    e.noise = ns;
  } else if (noise != "none") {
    throw ConfigError("noise", "expected none, default or custom");
  }
  e.mitigation = to_bool("mitigation", c.get("mitigation", "on"));
  const auto shots = geti("shots", 10000);
  if (shots < 1) throw ConfigError("shots", "must be positive");
  e.shots = static_cast<std::uint64_t>(shots);
  auto& m = e.mitigation_options;
  m.shots = e.shots;
  m.twirl_instances = static_cast<int>(geti("mitigation.twirls", m.twirl_instances));
  if (m.twirl_instances < 2) throw ConfigError("mitigation.twirls", "need at least 2");
  m.trajectories = static_cast<int>(geti("mitigation.trajectories", m.trajectories));
  if (m.trajectories < 1) throw ConfigError("mitigation.trajectories", "must be positive");
  m.bootstrap_resamples = static_cast<int>(geti("mitigation.bootstrap", m.bootstrap_resamples));
  if (c.has("mitigation.ladder")) {
    m.ladder.clear();
    for (const auto& s : split_list(c.get("mitigation.ladder", ""))) {
      const auto l = to_int("mitigation.ladder", s);
      if (l < 1 || l % 2 == 0) throw ConfigError("mitigation.ladder", "levels must be odd and >= 1");
      m.ladder.push_back(static_cast<int>(l));
    }
    if (m.ladder.empty()) throw ConfigError("mitigation.ladder", "empty ladder");
  }

  e.vqe.tol = getd("vqe.tol", e.vqe.tol);
  e.vqe.gtol = getd("vqe.gtol", e.vqe.gtol);
  e.vqe.max_iters = static_cast<int>(geti("vqe.max_iters", e.vqe.max_iters));
  if (!(e.vqe.tol > 0) || e.vqe.max_iters < 1) throw ConfigError("vqe.tol", "tolerances must be positive");

  e.topology = c.get("topology", "");
  e.embed_mode = c.get("embed.mode", "ecba");
  try {
    parse_mode(e.embed_mode);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("embed.mode", ex.what());
  }
  e.embed_budget = getd("embed.budget", 1.0);
  if (!(e.embed_budget > 0)) throw ConfigError("embed.budget", "must be positive");
  e.feasibility_samples = static_cast<int>(geti("feasibility.samples", 0));
  if (e.feasibility_samples < 0) throw ConfigError("feasibility.samples", "must be >= 0");
  if (e.feasibility_samples > 0 && e.model != Model::RandomChain)
    throw ConfigError("feasibility.samples", "only valid with model=random-chain");
  e.output = c.get("output", "out");

  for (const auto& s : split_list(c.get("scan.n", ""))) {
    const auto v = to_int("scan.n", s);
    if (v < 2 || v % 2) throw ConfigError("scan.n", "sizes must be even and >= 2");
    e.scan.sizes.push_back(static_cast<int>(v));
  }
  for (const auto& s : split_list(c.get("scan.delta", ""))) {
    const double d = to_double("scan.delta", s);
    if (!(d >= 1.0)) throw ConfigError("scan.delta", "must be >= 1");
    e.scan.deltas.push_back(d);
  }
  if (c.has("scan.ansatz")) {
    e.scan.ansaetze.clear();
    for (const auto& s : split_list(c.get("scan.ansatz", ""))) {
      const Ansatz a = parse_ansatz(s);
      if (a == Ansatz::CBA) throw ConfigError("scan.ansatz", "scan covers random chains only");
      e.scan.ansaetze.push_back(a);
    }
  }
  e.scan.repetitions = static_cast<int>(geti("scan.repetitions", 1));
  if (e.scan.repetitions < 1) throw ConfigError("scan.repetitions", "must be positive");
  e.scan.gradient_samples = static_cast<int>(geti("scan.grad_samples", 0));
  if (e.scan.gradient_samples != 0 && e.scan.gradient_samples < 30)
    throw ConfigError("scan.grad_samples", "use 0 to disable or at least 30 samples");
  e.scan.wall_time = to_bool("scan.wall_time", c.get("scan.wall_time", "on"));
  if (c.has("check.max_relative_error"))
    e.check_max_relative_error = getd("check.max_relative_error", 0);
  if (c.has("check.min_relative_accuracy"))
    e.check_min_relative_accuracy = getd("check.min_relative_accuracy", 0);
  return e;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"sample",    "rg",        "build",
                                                 "optimize",  "run-ideal", "run-noisy",
                                                 "embed",     "scan",      "report"};
  return names;
}

int run_command(const std::string& command, const Config& config, std::ostream& log) {
  try {
    const ExperimentConfig cfg = interpret(config);
    if (command == "scan" && cfg.model != Model::RandomChain)
      throw ConfigError("model", "scan needs model=random-chain");
    if (command == "scan" && (cfg.scan.sizes.empty() || cfg.scan.deltas.empty()))
      throw ConfigError(cfg.scan.sizes.empty() ? "scan.n" : "scan.delta", "scan needs a non-empty list");
    try {
      if (command == "sample") return cmd_sample(cfg, log);
      if (command == "rg") return cmd_rg(cfg, log);
      if (command == "build") return cmd_build(cfg, log);
      if (command == "optimize") return cmd_optimize(cfg, log);
      if (command == "run-ideal") return cmd_run_ideal(cfg, log);
      if (command == "run-noisy") return cmd_run_noisy(cfg, log);
      if (command == "embed") return cmd_embed(cfg, log);
      if (command == "scan") return cmd_scan(cfg, log);
      if (command == "report") return cmd_report(cfg, log);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(e.what());
    }
    throw ConfigError("command", "unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StageError& e) {
    log << command << " failed: " << e.what() << '\n';
    return kExitStage;
  }
}

std::vector<ScanRow> run_scan(const ExperimentConfig& cfg) {
  struct Cell {
    int n;
    double delta;
    int rep;
  };
  std::vector<Cell> cells;
  for (int n : cfg.scan.sizes)
    for (double d : cfg.scan.deltas)
      for (int r = 0; r < cfg.scan.repetitions; ++r) cells.push_back({n, d, r});
  const std::uint64_t scan_seed = derive_seed(cfg.seed, "scan");
  const std::size_t per = cfg.scan.ansaetze.size();
  std::vector<ScanRow> rows(cells.size() * per);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& cell = cells[k];
    const std::string label = "n=" + std::to_string(cell.n) + ",delta=" + fmt(cell.delta) +
                              ",rep=" + std::to_string(cell.rep);
    const std::uint64_t seed = derive_seed(scan_seed, label);
    const auto real = sample_couplings(cell.n, cell.delta, seed);
    const auto h = chain_terms(real);
    const auto exact = exact_energy(h);
    for (std::size_t a = 0; a < per; ++a) {
      const auto t0 = std::chrono::steady_clock::now();
      const Ansatz ans = cfg.scan.ansaetze[a];
      const auto family = ans == Ansatz::ECBA ? AnsatzFamily::ECBA : AnsatzFamily::HEA;
      const Circuit c = build_random_chain_ansatz(family, real);
      ScanRow& row = rows[k * per + a];
      row.n = cell.n;
      row.delta = cell.delta;
      row.ansatz = ans;
      row.seed = seed;
      row.e_vqe = minimize(c, h, derive_seed(seed, "optimize"), cfg.vqe).best_energy;
      row.e_exact = exact;
      if (cfg.scan.gradient_samples > 0)
        row.grad_variance = gradient_variance(c, h, cfg.scan.gradient_samples,
                                              derive_seed(seed, "gradient-variance"),
                                              InitRange::Full)
                                .mean_variance;
      row.wall_time = cfg.scan.wall_time
                          ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                          : 0.0;
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "n,delta,ansatz,seed,E_vqe,E_exact,relative_error,relative_accuracy,grad_variance,"
         "wall_time\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt(r.delta) << ',' << ansatz_name(r.ansatz) << ',' << r.seed << ','
        << fmt(r.e_vqe) << ',';
    if (r.e_exact)
      out << fmt(*r.e_exact) << ',' << fmt(relative_error(*r.e_exact, r.e_vqe)) << ','
          << fmt(relative_accuracy(*r.e_exact, r.e_vqe).accuracy);
    else
      out << ",,";
    out << ',';
    if (r.grad_variance) out << fmt(*r.grad_variance);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_time);
    out << ',' << buf << '\n';
  }
}

}  // namespace ecba
