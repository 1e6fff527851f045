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

// The run, sweep and verify subcommands, independent of argument parsing.

#ifndef DPPO_CLI_COMMANDS_H_
#define DPPO_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "dppo/cli/verify.h"

namespace dppo {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitInvariant = 3,
};

struct RunArgs {
  std::string config_path;
  std::string instance_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
};

// Writes <out>/records.jsonl and <out>/summary.csv.
int CmdRun(const RunArgs& args, std::ostream& err);

struct SweepArgs {
  std::string spec_path;
  std::string out_dir;
  int workers = 1;
};

// Writes <out>/sweep.csv (one row per value and seed, plus a status column)
// and <out>/aggregate.csv (mean and std over seeds per axis value).
int CmdSweep(const SweepArgs& args, std::ostream& err);

struct VerifyArgs {
  std::string out_dir;
  VerifyOptions options;
};

// Writes <out>/verify_report.txt; kExitInvariant when any check fails.
int CmdVerify(const VerifyArgs& args, std::ostream& err);

}  // namespace dppo

#endif  // DPPO_CLI_COMMANDS_H_
