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

// ecba: command-line driver for the experiment pipeline.
//
//   ecba <command> --config <file> [--override key=value]...

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecba/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Emergent-coupling ansatz workbench"};
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;

  std::string commands;
  for (const auto& c : ecba::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)
      ->required()
      ->check(CLI::IsMember(ecba::command_names()));
  app.add_option("-c,--config", config_path, "key=value configuration file")->required();
  app.add_option("-o,--override", overrides, "Override one setting, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ecba::kExitOk : ecba::kExitConfig;
  }

  ecba::Config config;
  try {
    config = ecba::Config::load(config_path);
    for (const auto& o : overrides) config.set(o);
  } catch (const ecba::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ecba::kExitConfig;
  }
  return ecba::run_command(command, config, std::cerr);
}
