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

// Self-contained invariant suite behind the `verify` command.

#ifndef DPPO_CLI_VERIFY_H_
#define DPPO_CLI_VERIFY_H_

#include <string>
#include <vector>

namespace dppo {

struct VerifyOptions {
  // Fault injection for negative controls; the defaults leave every check
  // honest. `sigma_scale` multiplies the noise variance used by a private
  // PG run, `duplicate_user` replays user identifiers in a run.
  double sigma_scale = 1.0;
  bool duplicate_user = false;
  unsigned long long seed = 20260101;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> RunVerifySuite(const VerifyOptions& options);

// One "PASS name: detail" / "FAIL name: detail" line per check followed by
// a totals line.
std::string FormatVerifyReport(const std::vector<CheckResult>& results);

}  // namespace dppo

#endif  // DPPO_CLI_VERIFY_H_
