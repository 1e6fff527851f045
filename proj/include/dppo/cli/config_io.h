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

// Experiment configuration and sweep specifications, both JSON.

#ifndef DPPO_CLI_CONFIG_IO_H_
#define DPPO_CLI_CONFIG_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dppo/core/policy.h"
#include "dppo/trainer/schedule.h"

namespace dppo {

// Config file keys (all optional except "algorithm"):
//   algorithm        "pg" | "pg-logbarrier" | "npg" | "rebel"
//   policy           "tabular" (default) | "loglinear"
//   total_samples    N
//   batch_size       m or "auto"
//   iterations       T or "auto"
//   learning_rate    eta or "auto"
//   epsilon          real or "inf" (default "inf")
//   delta            real in [0, 1) (default 0)
//   base_policy      "on-policy" | "uniform" | {"table": [[...], ...]}
//   regularization   lambda
//   seed             unsigned 64-bit integer
//   oracle           "exact" | "expmech" | "ridge"
//   oracle_options   {"radius", "grid_points", "ridge", "sensitivity_base"}
//   advantage_bound  A for the REBEL step size
//   stop_at_certificate  bool
//   failure_probability  zeta, reporting only
struct ExperimentConfig {
  RunConfig run;
  PolicyFamily policy = PolicyFamily::kTabularSoftmax;
};

// InvalidArgument on malformed JSON, unknown keys, wrong types or values
// that can never be valid (for example delta = 0 with a Gaussian-noise
// algorithm, or a non-private oracle under a finite epsilon).
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const std::string& text);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

enum class SweepAxis { kEpsilon, kTotalSamples, kBatchSize };

std::string SweepAxisName(SweepAxis axis);

// Sweep file keys:
//   axis      "epsilon" | "total_samples" | "batch_size"
//   values    list (epsilon values may include "inf")
//   seeds     list of unsigned integers
//   config    path to an experiment config, or an inline config object
//   instance  path to a bandit instance
// Relative paths are resolved against the sweep file's directory.
struct SweepSpec {
  SweepAxis axis = SweepAxis::kEpsilon;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  ExperimentConfig base;
  std::string instance_path;
};

absl::StatusOr<SweepSpec> ParseSweepSpec(const std::string& text,
                                         const std::string& base_dir);
absl::StatusOr<SweepSpec> LoadSweepSpec(const std::string& path);

// `base` with the sweep axis set to `value` and the seed replaced.
absl::StatusOr<ExperimentConfig> SweepPoint(const SweepSpec& spec,
                                            double value, std::uint64_t seed);

absl::StatusOr<std::string> ReadTextFile(const std::string& path);

}  // namespace dppo

#endif  // DPPO_CLI_CONFIG_IO_H_
