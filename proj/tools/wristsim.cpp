// Copyright 2026 The wristfic Authors
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


// Command-line driver.
//
//   wristsim run <config.json> [--out DIR] [--condition NAME] [--jobs N]
//   wristsim --check [--seed N]

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wristfic/checks.hpp"
#include "wristfic/config.hpp"
#include "wristfic/emit.hpp"

namespace {

int run_checks(std::uint64_t seed) {
  int failed = 0;
  for (const auto& c : wristfic::run_property_checks(seed)) {
    std::printf("%-4s %-24s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
    if (!c.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wrist pointing simulation with a fractal impedance controller"};
  app.require_subcommand(0, 1);

  bool check = false;
  std::uint64_t seed = 1;
  app.add_flag("--check", check, "Run the property and invariant suite");
  app.add_option("--seed", seed, "Seed for the randomized property checks");

  std::string config_path;
  wristfic::EmitOptions options;
  options.jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* run = app.add_subcommand("run", "Simulate the configured conditions");
  run->add_option("config", config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", options.output_dir, "Output directory");
  run->add_option("--condition", options.condition, "Run a single condition");
  run->add_option("--jobs", options.jobs, "Conditions simulated concurrently")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (check) {
    const int status = run_checks(seed);
    if (status != 0 || !run->parsed()) return status;
  }
  if (!run->parsed()) {
    std::cerr << app.help();
    return 2;
  }

  wristfic::ExperimentConfig config;
  try {
    config = wristfic::load_config(config_path);
  } catch (const wristfic::ConfigError& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
    return 2;
  }
  return wristfic::run_and_emit(config, options, std::cerr);
}
