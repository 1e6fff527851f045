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

#include "dppo/trainer/trainer.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dppo/core/exact.h"
#include "dppo/mechanisms/budget_ledger.h"

namespace dppo {

absl::StatusOr<RunResult> Run(const RunConfig& config,
                              const Schedule& schedule,
                              const ContextualBandit& bandit,
                              const Policy& prototype,
                              const PrivUpdate& update,
                              const RunHooks& hooks) {
  if (prototype.num_states() != bandit.num_states() ||
      prototype.num_actions() != bandit.num_actions()) {
    return absl::InvalidArgumentError("policy and bandit shapes differ");
  }
  if (schedule.iterations < 0 || schedule.batch_size < 1) {
    return absl::InvalidArgumentError("schedule needs T >= 0 and m >= 1");
  }
  if (schedule.total_samples != schedule.batch_size * schedule.iterations) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "schedule is inconsistent: N = %d, m * T = %d",
        schedule.total_samples, schedule.batch_size * schedule.iterations));
  }
  if (absl::Status s =
          config.base_policy.Validate(bandit.num_states(), bandit.num_actions());
      !s.ok()) {
    return s;
  }

  auto initial = prototype.WithTheta(Eigen::VectorXd::Zero(prototype.dim()));
  if (!initial.ok()) return initial.status();
  Policy current = *std::move(initial);

  Rng rng(config.seed);
  BudgetLedger ledger(config.privacy);
  UserPool users;
  const double optimum = bandit.OptimalValue();
  const PolicyTable comparator = GreedyTable(bandit);

  RunResult result{.records = {},
                   .final_policy = current,
                   .schedule = schedule,
                   .total_budget = config.privacy};
  result.records.reserve(static_cast<size_t>(schedule.iterations));
  for (long long t = 1; t <= schedule.iterations; ++t) {
    RunRecord record;
    record.iteration = t;
    record.value = ExactValue(current, bandit);
    record.grad_norm = ExactGradient(current, bandit).norm();
    record.gap = optimum - record.value;
    const PolicyTable base_table = config.base_policy.Resolve(current);
    record.coverage = CoverageCoefficient(comparator, base_table);

    if (update.ShouldStop(current, bandit, record)) {
      record.budget = ledger.Total();
      record.batches_seen = ledger.batches_seen();
      result.records.push_back(std::move(record));
      result.stopped_by_certificate = true;
      break;
    }

    if (hooks.replay_users && t == 2) users = UserPool();
    auto batch = SampleBatch(bandit, current, config.base_policy,
                             schedule.batch_size, rng, ledger, users);
    if (!batch.ok()) return batch.status();
    auto outcome = update.Update(*batch, current, rng);
    if (!outcome.ok()) return outcome.status();
    auto next = current.WithTheta(outcome->next_theta);
    if (!next.ok()) return next.status();
    record.pre_projection_norm = outcome->pre_projection_norm;
    update.Diagnose(*outcome, current, *next, base_table, bandit, record);
    record.budget = ledger.Total();
    record.batches_seen = ledger.batches_seen();
    result.records.push_back(std::move(record));
    current = *std::move(next);
  }

  result.final_value = ExactValue(current, bandit);
  result.final_gap = optimum - result.final_value;
  result.final_policy = std::move(current);
  result.users_consumed = static_cast<long long>(users.next());
  result.batches = ledger.batches_seen();
  result.total_budget = ledger.Total();
  return result;
}

double AverageValue(const std::vector<RunRecord>& records) {
  if (records.empty()) return 0.0;
  double total = 0.0;
  for (const RunRecord& r : records) total += r.value;
  return total / static_cast<double>(records.size());
}

}  // namespace dppo
