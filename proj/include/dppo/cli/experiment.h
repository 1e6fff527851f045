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

// Builds a runnable experiment (schedule, policy and update oracle) from a
// configuration and an instance, and summarizes finished runs.

#ifndef DPPO_CLI_EXPERIMENT_H_
#define DPPO_CLI_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "dppo/cli/config_io.h"
#include "dppo/core/bandit_io.h"
#include "dppo/trainer/trainer.h"

namespace dppo {

struct Experiment {
  Schedule schedule;
  Policy prototype;
  std::shared_ptr<const PrivUpdate> update;
};

// InvalidArgument when the config does not fit the instance (for example a
// log-linear policy on an instance without features).
absl::StatusOr<Experiment> PrepareExperiment(const ExperimentConfig& config,
                                             const BanditInstance& instance);

// PrepareExperiment followed by Run.
absl::StatusOr<RunResult> RunExperiment(const ExperimentConfig& config,
                                        const BanditInstance& instance,
                                        const RunHooks& hooks = {});

struct SummaryRow {
  std::string algo;
  double epsilon = 0.0;
  double delta = 0.0;
  long long total_samples = 0;
  long long batch_size = 0;
  long long iterations = 0;
  std::uint64_t seed = 0;
  double final_value = 0.0;
  double final_gap = 0.0;
  double mean_grad_sq = 0.0;
  // Largest J(theta_t) over the run, final iterate included.
  double best_value = 0.0;
};

SummaryRow Summarize(const ExperimentConfig& config, const RunResult& result);

// "algo,epsilon,delta,N,m,T,seed,final_J,final_gap,mean_grad_sq"
std::string SummaryHeader();
std::string FormatSummaryRow(const SummaryRow& row);

}  // namespace dppo

#endif  // DPPO_CLI_EXPERIMENT_H_
