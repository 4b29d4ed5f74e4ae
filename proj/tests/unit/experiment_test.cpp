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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "gtest/gtest.h"

namespace ecba {
namespace {

namespace fs = std::filesystem;

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("ecba_test_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(ConfigTest, ParseIncludeAndOverride) {
  ScratchDir dir("config");
  write_file(dir.path() / "base.conf", "# defaults\nn = 6\nseed = 3\n");
  fs::create_directories(dir.path() / "sub");
  write_file(dir.path() / "sub" / "run.conf", "include ../base.conf\nn = 8   # trailing\n");
  Config c = Config::load(dir.path() / "sub" / "run.conf");
  EXPECT_EQ(c.get("n", ""), "8");
  EXPECT_EQ(c.get("seed", ""), "3");
  EXPECT_EQ(c.get("delta", "fallback"), "fallback");
  c.set("n=10");
  EXPECT_EQ(interpret(c).n, 10);
  EXPECT_THROW(c.set("no-equals-sign"), ConfigError);
}

TEST(ConfigTest, IncludeCycleAndMissingFile) {
  ScratchDir dir("cycle");
  write_file(dir.path() / "a.conf", "include b.conf\n");
  write_file(dir.path() / "b.conf", "include a.conf\n");
  EXPECT_THROW(Config::load(dir.path() / "a.conf"), ConfigError);
  EXPECT_THROW(Config::load(dir.path() / "none.conf"), ConfigError);
}

ConfigError interpret_error(const std::string& text) {
  try {
    interpret(Config::parse(text));
  } catch (const ConfigError& e) {
    return e;
  }
  return ConfigError("", "no error");
}

TEST(InterpretTest, RejectsBadInput) {
  EXPECT_EQ(interpret_error("n = 10\nvqe.tolerance = 1e-3\n").key(), "vqe.tolerance");
  EXPECT_EQ(interpret_error("n = 7\n").key(), "n");
  EXPECT_EQ(interpret_error("n = ten\n").key(), "n");
  EXPECT_EQ(interpret_error("delta = -1\n").key(), "delta");
  EXPECT_EQ(interpret_error("model = rainbow\nansatz = ECBA\n").key(), "ansatz");
  EXPECT_EQ(interpret_error("model = random-chain\nansatz = CBA\n").key(), "ansatz");
  EXPECT_EQ(interpret_error("model = rainbow\ndelta = 2\n").key(), "delta");
  EXPECT_EQ(interpret_error("alpha = 2\n").key(), "alpha");
  EXPECT_EQ(interpret_error("noise = loud\n").key(), "noise");
  EXPECT_EQ(interpret_error("noise = custom\nnoise.p_cz = 0.7\n").key(), "noise.p_cz");
  EXPECT_EQ(interpret_error("mitigation.ladder = 1, 2\n").key(), "mitigation.ladder");
  EXPECT_EQ(interpret_error("scan.grad_samples = 10\n").key(), "scan.grad_samples");
}

TEST(InterpretTest, Defaults) {
  const auto cfg = interpret(Config::parse("model = rainbow\nansatz = CBA\nn = 10\nj = 50\n"));
  EXPECT_EQ(cfg.model, Model::Rainbow);
  EXPECT_EQ(cfg.ansatz, Ansatz::CBA);
  EXPECT_EQ(cfg.rainbow.j, 50.0);
  EXPECT_EQ(cfg.rainbow.n, 10);
  EXPECT_FALSE(cfg.noise.has_value());
  const auto noisy = interpret(Config::parse("noise = default\n"));
  ASSERT_TRUE(noisy.noise.has_value());
  EXPECT_EQ(noisy.noise->p_cz, NoiseSpec{}.p_cz);
}

Config pipeline_config(const fs::path& out, const std::string& extra = "") {
  return Config::parse("model = random-chain\nn = 2\ndelta = 2\nseed = 5\nansatz = ECBA\n"
                       "vqe.tol = 1e-12\nvqe.gtol = 1e-10\noutput = " +
                       out.string() + "\n" + extra);
}

int run_all(const Config& c, std::ostream& log, std::initializer_list<const char*> cmds) {
  for (const char* cmd : cmds) {
    const int code = run_command(cmd, c, log);
    if (code != kExitOk) return code;
  }
  return kExitOk;
}

TEST(PipelineTest, TwoSiteChainReachesSinglet) {
  ScratchDir dir("pipeline");
  const Config c = pipeline_config(dir.path(), "check.max_relative_error = 1e-8\n");
  std::ostringstream log;
  ASSERT_EQ(run_all(c, log, {"sample", "rg", "build", "optimize", "run-ideal"}), kExitOk) << log.str();
  const std::string ideal = slurp(dir.path() / "ideal.csv");
  EXPECT_EQ(ideal.rfind("n,model,ansatz,E_vqe,E_exact,relative_error,relative_accuracy\n2,", 0), 0u);
  // E = -3J/4 for the realized coupling.
  const double j = parse_realization(slurp(dir.path() / "realization.txt")).couplings.at(0);
  std::string line;
  std::istringstream rows(ideal);
  std::getline(rows, line);
  std::getline(rows, line);
  std::vector<std::string> f;
  std::stringstream ls(line);
  for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
  ASSERT_EQ(f.size(), 7u);
  EXPECT_NEAR(std::stod(f[3]), std::stod(f[4]), 1e-8);
  EXPECT_NEAR(std::stod(f[4]), -0.75 * j, 1e-12);

  const std::string manifest = slurp(dir.path() / "manifest.txt");
  for (const char* stage : {"sample", "rg", "build", "optimize", "run-ideal"})
    EXPECT_NE(manifest.find(std::string("stage ") + stage + " seed "), std::string::npos) << stage;
  EXPECT_NE(slurp(dir.path() / "run.log").find("run-ideal"), std::string::npos);
}

TEST(PipelineTest, MissingArtifactIsStageFailure) {
  ScratchDir dir("missing");
  const Config c = pipeline_config(dir.path());
  std::ostringstream log;
  EXPECT_EQ(run_command("optimize", c, log), kExitStage);
  EXPECT_NE(log.str().find("circuit.txt"), std::string::npos) << log.str();
}

TEST(PipelineTest, ConfigErrorsMapToExitOne) {
  ScratchDir dir("cfgerr");
  std::ostringstream log;
  EXPECT_EQ(run_command("sample", Config::parse("n = 3\n"), log), kExitConfig);
  EXPECT_EQ(run_command("frobnicate", pipeline_config(dir.path()), log), kExitConfig);
  // run-noisy without a noise model.
  EXPECT_EQ(run_command("run-noisy", pipeline_config(dir.path()), log), kExitConfig);
}

TEST(PipelineTest, ThresholdFailureIsExitThree) {
  ScratchDir dir("threshold");
  const Config c = pipeline_config(dir.path(), "n = 8\ndelta = 1\nvqe.max_iters = 1\n"
                                               "check.max_relative_error = 1e-12\n");
  std::ostringstream log;
  EXPECT_EQ(run_all(c, log, {"sample", "rg", "build", "optimize", "run-ideal"}), kExitThreshold);
}

TEST(PipelineTest, SameSeedSameArtifacts) {
  ScratchDir a("same_a"), b("same_b");
  std::ostringstream log;
  const auto ca = pipeline_config(a.path(), "n = 6\n");
  const auto cb = pipeline_config(b.path(), "n = 6\n");
  ASSERT_EQ(run_all(ca, log, {"sample", "rg", "build", "optimize"}), kExitOk);
  ASSERT_EQ(run_all(cb, log, {"sample", "rg", "build", "optimize"}), kExitOk);
  for (const char* f : {"realization.txt", "pairing.txt", "circuit.txt", "vqe.txt"})
    EXPECT_EQ(slurp(a.path() / f), slurp(b.path() / f)) << f;
}

TEST(PipelineTest, EmbedRainbowOnGrid) {
  ScratchDir dir("embed");
  write_file(dir.path() / "grid.txt",
             "layout g\nnode 0\nnode 1\nnode 2\nnode 3\nnode 4\nnode 5\n"
             "edge 0 1\nedge 1 2\nedge 3 4\nedge 4 5\nedge 0 3\nedge 1 4\nedge 2 5\n");
  const Config c = Config::parse("model = rainbow\nansatz = CBA\nn = 6\ntopology = " +
                                 (dir.path() / "grid.txt").string() + "\noutput = " +
                                 (dir.path() / "out").string() + "\n");
  std::ostringstream log;
  EXPECT_EQ(run_command("embed", c, log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "embedding.txt"));
}

TEST(ScanTest, ByteIdenticalReruns) {
  ScratchDir a("scan_a"), b("scan_b");
  const std::string body =
      "model = random-chain\nseed = 11\nscan.n = 4, 6\nscan.delta = 2\nscan.repetitions = 2\n"
      "scan.grad_samples = 30\nscan.wall_time = off\noutput = ";
  std::ostringstream log;
  ASSERT_EQ(run_command("scan", Config::parse(body + a.path().string() + "\n"), log), kExitOk);
  ASSERT_EQ(run_command("scan", Config::parse(body + b.path().string() + "\n"), log), kExitOk);
  const std::string sa = slurp(a.path() / "scan.csv");
  EXPECT_EQ(sa, slurp(b.path() / "scan.csv"));
  EXPECT_EQ(sa.rfind("n,delta,ansatz,seed,E_vqe,E_exact,relative_error,relative_accuracy,"
                     "grad_variance,wall_time\n", 0),
            0u);
  // 2 sizes x 1 delta x 2 ansaetze x 2 repetitions.
  EXPECT_EQ(std::count(sa.begin(), sa.end(), '\n'), 9);
}

}  // namespace
}  // namespace ecba
