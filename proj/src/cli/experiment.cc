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

#include "dppo/cli/experiment.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dppo/dpnpg/npg_update.h"
#include "dppo/dpnpg/privls.h"
#include "dppo/dppg/pg_update.h"
#include "dppo/dprebel/rebel_update.h"
#include "dppo/mechanisms/privacy_params.h"
#include "dppo/trainer/records_io.h"

namespace dppo {
namespace {

std::shared_ptr<const PrivLsOracle> MakeOracle(const RunConfig& run) {
  switch (run.oracle.kind) {
    case OracleKind::kExact:
      return std::make_shared<ExactLeastSquaresOracle>();
    case OracleKind::kExpMech:
      return std::make_shared<ExponentialMechanismOracle>(
          run.privacy.epsilon, run.oracle.grid_points);
    case OracleKind::kRidge:
      return std::make_shared<RidgeGaussianOracle>(run.privacy,
                                                   run.oracle.ridge);
  }
  return nullptr;
}

}  // namespace

absl::StatusOr<Experiment> PrepareExperiment(const ExperimentConfig& config,
                                             const BanditInstance& instance) {
  const ContextualBandit& bandit = instance.bandit;
  const RunConfig& run = config.run;
  std::optional<Policy> prototype;
  if (config.policy == PolicyFamily::kLogLinear) {
    if (!instance.features) {
      return absl::InvalidArgumentError(
          "a log-linear policy needs an instance with features");
    }
    prototype = Policy::LogLinear(instance.features);
  } else {
    prototype = Policy::TabularSoftmax(bandit.num_states(),
                                       bandit.num_actions());
  }
  if (run.algorithm == Algorithm::kPgLogBarrier &&
      config.policy != PolicyFamily::kTabularSoftmax) {
    return absl::InvalidArgumentError(
        "the log-barrier variant needs a tabular policy");
  }
  if (absl::Status s =
          run.base_policy.Validate(bandit.num_states(), bandit.num_actions());
      !s.ok()) {
    return s;
  }

  const PolicyConstants constants = prototype->Constants(bandit.r_max());
  auto schedule = AutoSchedule(run, constants, bandit, prototype->dim());
  if (!schedule.ok()) return schedule.status();

  std::shared_ptr<const PrivUpdate> update;
  const double radius = run.oracle.radius;
  const double base = SensitivityBase(run, bandit);
  switch (run.algorithm) {
    case Algorithm::kPg:
    case Algorithm::kPgLogBarrier:
      update = std::make_shared<PgUpdate>(
          PgUpdateSpec{schedule->learning_rate, schedule->noise_variance,
                       run.regularization},
          run.stop_at_certificate);
      break;
    case Algorithm::kNpg:
      update = std::make_shared<NpgUpdate>(schedule->learning_rate,
                                           MakeOracle(run), radius, base);
      break;
    case Algorithm::kRebel:
      update = std::make_shared<RebelUpdate>(schedule->learning_rate,
                                             MakeOracle(run), radius, base);
      break;
  }
  return Experiment{*schedule, *std::move(prototype), std::move(update)};
}

absl::StatusOr<RunResult> RunExperiment(const ExperimentConfig& config,
                                        const BanditInstance& instance,
                                        const RunHooks& hooks) {
  auto experiment = PrepareExperiment(config, instance);
  if (!experiment.ok()) return experiment.status();
  return Run(config.run, experiment->schedule, instance.bandit,
             experiment->prototype, *experiment->update, hooks);
}

SummaryRow Summarize(const ExperimentConfig& config, const RunResult& result) {
  SummaryRow row;
  row.algo = std::string(AlgorithmName(config.run.algorithm));
  row.epsilon = config.run.privacy.epsilon;
  row.delta = config.run.privacy.delta;
  row.total_samples = result.schedule.total_samples;
  row.batch_size = result.schedule.batch_size;
  row.iterations = result.schedule.iterations;
  row.seed = config.run.seed;
  row.final_value = result.final_value;
  row.final_gap = result.final_gap;
  auto certificate = StationarityCertificate(result.records);
  row.mean_grad_sq = certificate.ok() ? *certificate : 0.0;
  row.best_value = result.final_value;
  for (const RunRecord& r : result.records) {
    row.best_value = std::max(row.best_value, r.value);
  }
  return row;
}

std::string SummaryHeader() {
  return "algo,epsilon,delta,N,m,T,seed,final_J,final_gap,mean_grad_sq";
}

std::string FormatSummaryRow(const SummaryRow& row) {
  return absl::StrJoin(
      {row.algo, FormatReal(row.epsilon), FormatReal(row.delta),
       absl::StrCat(row.total_samples), absl::StrCat(row.batch_size),
       absl::StrCat(row.iterations), absl::StrCat(row.seed),
       FormatReal(row.final_value), FormatReal(row.final_gap),
       FormatReal(row.mean_grad_sq)},
      ",");
}

}  // namespace dppo
