//
// Copyright 2026 The dppo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// dppo: run, sweep and verify private policy-optimization experiments.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dppo/cli/commands.h"

int main(int argc, char** argv) {
  CLI::App app{"Differentially private policy optimization on contextual "
               "bandits"};
  app.require_subcommand(1);

  dppo::RunArgs run;
  std::uint64_t seed = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", run.config_path, "Experiment config (JSON)")
      ->required();
  run_cmd->add_option("--instance", run.instance_path, "Bandit instance (JSON)")
      ->required();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", seed, "Seed overriding the config");

  dppo::SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a grid of values x seeds");
  sweep_cmd->add_option("--spec", sweep.spec_path, "Sweep spec (JSON)")
      ->required();
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")
      ->required();
  sweep_cmd->add_option("--workers", sweep.workers, "Concurrent runs")
      ->check(CLI::PositiveNumber);

  dppo::VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_option("--out", verify.out_dir, "Output directory")
      ->required();
  // Negative-control hooks, hidden from --help.
  verify_cmd->add_option("--inject-sigma-scale", verify.options.sigma_scale)
      ->group("");
  verify_cmd->add_flag("--inject-duplicate-user",
                       verify.options.duplicate_user)
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dppo::kExitOk : dppo::kExitValidation;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = seed;
    return dppo::CmdRun(run, std::cerr);
  }
  if (*sweep_cmd) return dppo::CmdSweep(sweep, std::cerr);
  return dppo::CmdVerify(verify, std::cerr);
}
