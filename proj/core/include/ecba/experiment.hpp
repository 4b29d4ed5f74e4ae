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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecba/noise.hpp"
#include "ecba/vqe.hpp"

namespace ecba {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitStage = 2,
  kExitThreshold = 3,
};

/// Invalid or inconsistent configuration; names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A pipeline stage could not run, e.g. because an upstream artifact is
/// missing or a numerical routine failed.
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value settings. Later assignments win. A line
/// "include <path>" splices another file, resolved relative to the
/// including file.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, const std::filesystem::path& base_dir = ".");

  /// Applies a "key=value" override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  void parse_into(const std::string& text, const std::filesystem::path& base_dir, int depth);
  std::map<std::string, std::string> values_;
};

enum class Model { RandomChain, Rainbow };
enum class Ansatz { ECBA, HEA, CBA };

const char* model_name(Model m);
const char* ansatz_name(Ansatz a);
Ansatz parse_ansatz(const std::string& s);

struct ScanConfig {
  std::vector<int> sizes;
  std::vector<double> deltas;
  std::vector<Ansatz> ansaetze = {Ansatz::ECBA, Ansatz::HEA};
  int repetitions = 1;
  int gradient_samples = 0;  ///< 0 disables the grad_variance column
  bool wall_time = true;     ///< off writes 0 so reruns are byte-identical
};

struct ExperimentConfig {
  Model model = Model::RandomChain;
  int n = 10;
  double delta = 1.0;
  RainbowSpec rainbow;
  Ansatz ansatz = Ansatz::ECBA;
  std::uint64_t seed = 1;
  std::optional<NoiseSpec> noise;
  bool mitigation = true;
  std::uint64_t shots = 10000;
  MitigationOptions mitigation_options;
  MinimizeOptions vqe;
  std::string topology;
  std::string embed_mode = "ecba";
  double embed_budget = 1.0;
  int feasibility_samples = 0;
  std::filesystem::path output = "out";
  ScanConfig scan;
  std::optional<double> check_max_relative_error;
  std::optional<double> check_min_relative_accuracy;
};

/// Validates types, ranges and cross-field consistency. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
ExperimentConfig interpret(const Config& config);

const std::vector<std::string>& command_names();

/// Runs one pipeline command. Stage artifacts live in config.output;
/// human-oriented progress goes to `log`. Returns an ExitCode; ConfigError
/// and StageError are translated into codes as well.
int run_command(const std::string& command, const Config& config, std::ostream& log);

/// One row of the scan table.
struct ScanRow {
  int n = 0;
  double delta = 0.0;
  Ansatz ansatz = Ansatz::ECBA;
  std::uint64_t seed = 0;
  double e_vqe = 0.0;
  std::optional<double> e_exact;
  std::optional<double> grad_variance;
  double wall_time = 0.0;
};

std::vector<ScanRow> run_scan(const ExperimentConfig& cfg);
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

}  // namespace ecba
