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

// The one-pass meta loop: every iteration draws a fresh batch of users,
// hands it to a private update oracle and records exact diagnostics.

#ifndef DPPO_TRAINER_TRAINER_H_
#define DPPO_TRAINER_TRAINER_H_

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"
#include "dppo/mechanisms/privacy_params.h"
#include "dppo/mechanisms/rng.h"
#include "dppo/trainer/batch.h"
#include "dppo/trainer/schedule.h"

namespace dppo {

// Metrics for iterate theta_t. The exact quantities are evaluated by
// enumeration; the optional ones are filled by the oracle's diagnostics for
// the step taken from theta_t.
struct RunRecord {
  long long iteration = 0;  // t, starting at 1
  double value = 0.0;       // J(theta_t)
  double grad_norm = 0.0;   // ||grad J(theta_t)||
  double gap = 0.0;         // J* - J(theta_t)
  // err_t: square root of the population residual of the step's regression.
  std::optional<double> est_err;
  PrivacyParams budget = PrivacyParams::NonPrivate();  // after this batch
  long long batches_seen = 0;
  // C_{mu_t -> pi*} with pi* the greedy optimal policy.
  double coverage = 0.0;
  std::optional<double> noise_variance;
  std::optional<double> regularized_grad_norm;
  std::optional<double> pre_projection_norm;
  // max over (x, y) of |A_t(x, y)| for the REBEL step.
  std::optional<double> max_abs_advantage;
};

struct UpdateOutcome {
  Eigen::VectorXd next_theta;
  // w_t for regression-based updates, the noisy gradient for PG.
  Eigen::VectorXd direction;
  std::optional<double> pre_projection_norm;
};

// A private update oracle, the PrivUpdate step of the meta loop.
// Implementations are immutable and may be shared across concurrent runs.
class PrivUpdate {
 public:
  virtual ~PrivUpdate() = default;

  virtual std::string_view name() const = 0;

  virtual absl::StatusOr<UpdateOutcome> Update(const TrajectoryBatch& batch,
                                               const Policy& current,
                                               Rng& rng) const = 0;

  // Fills oracle-specific diagnostics for the step current -> next.
  virtual void Diagnose(const UpdateOutcome& /*outcome*/,
                        const Policy& /*current*/, const Policy& /*next*/,
                        const PolicyTable& /*base_table*/,
                        const ContextualBandit& /*bandit*/,
                        RunRecord& /*record*/) const {}

  // Checked before sampling at every iterate; may annotate the record.
  virtual bool ShouldStop(const Policy& /*current*/,
                          const ContextualBandit& /*bandit*/,
                          RunRecord& /*record*/) const {
    return false;
  }
};

struct RunResult {
  std::vector<RunRecord> records;
  Policy final_policy;
  double final_value = 0.0;
  double final_gap = 0.0;
  Schedule schedule;
  long long users_consumed = 0;
  long long batches = 0;
  PrivacyParams total_budget = PrivacyParams::NonPrivate();
  bool stopped_by_certificate = false;
};

// Fault injection for negative controls. Never set in normal runs.
struct RunHooks {
  // Restart user identifiers at the second batch, so the ledger sees a
  // repeated user.
  bool replay_users = false;
};

// Runs schedule.iterations steps from theta_1 = 0 in the family of
// `prototype`. Deterministic given config.seed. Errors from batch sampling
// (ledger violations) and from the oracle are propagated.
absl::StatusOr<RunResult> Run(const RunConfig& config,
                              const Schedule& schedule,
                              const ContextualBandit& bandit,
                              const Policy& prototype,
                              const PrivUpdate& update,
                              const RunHooks& hooks = {});

// Mean of the per-iteration values J(theta_t), t = 1..T.
double AverageValue(const std::vector<RunRecord>& records);

}  // namespace dppo

#endif  // DPPO_TRAINER_TRAINER_H_
