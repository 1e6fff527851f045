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

// Natural policy gradient through regression of advantages on scores.

#ifndef DPPO_DPNPG_NPG_UPDATE_H_
#define DPPO_DPNPG_NPG_UPDATE_H_

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"
#include "dppo/dpnpg/privls.h"
#include "dppo/mechanisms/rng.h"
#include "dppo/trainer/batch.h"
#include "dppo/trainer/trainer.h"

namespace dppo {

// One row per record: feature score(x_i, y_i) at the current parameters,
// label A_i. The feature bound is 2B, which covers every score vector.
PrivLsProblem BuildLsProblem(const TrajectoryBatch& batch,
                             const Policy& policy, double radius,
                             double sensitivity_base);

// E_{x ~ rho, y ~ mu}[(A^pi(x, y) - w . score(x, y))^2], by enumeration.
double NpgPopulationError(const Eigen::VectorXd& w, const Policy& policy,
                          const PolicyTable& base_table,
                          const ContextualBandit& bandit);

// theta + eta w with w from the oracle (||w|| <= W).
absl::StatusOr<UpdateOutcome> NpgPrivUpdate(const TrajectoryBatch& batch,
                                            const Policy& policy,
                                            double learning_rate,
                                            const PrivLsOracle& oracle,
                                            double radius,
                                            double sensitivity_base, Rng& rng);

// sqrt(beta W^2 log|Y| / (2T)) + sqrt(C) mean_t err_t: the regret bound as
// usually stated for the step size sqrt(2 log|Y| / (T beta W^2)).
double NpgRegretBound(double beta, double radius, long long iterations,
                      int num_actions, double coverage,
                      const std::vector<double>& errors);

// The same bound with the mirror-descent term evaluated exactly for that
// step size: log|Y| / (eta T) + eta beta W^2 / 2 = sqrt(2 beta W^2 log|Y|/T).
double NpgRegretBoundFromStep(double beta, double radius,
                              long long iterations, int num_actions,
                              double coverage,
                              const std::vector<double>& errors);

class NpgUpdate : public PrivUpdate {
 public:
  NpgUpdate(double learning_rate, std::shared_ptr<const PrivLsOracle> oracle,
            double radius, double sensitivity_base)
      : learning_rate_(learning_rate),
        oracle_(std::move(oracle)),
        radius_(radius),
        sensitivity_base_(sensitivity_base) {}

  std::string_view name() const override { return "npg"; }
  double learning_rate() const { return learning_rate_; }

  absl::StatusOr<UpdateOutcome> Update(const TrajectoryBatch& batch,
                                       const Policy& current,
                                       Rng& rng) const override;
  // est_err = sqrt(NpgPopulationError(w_t)) under the run's mu_t.
  void Diagnose(const UpdateOutcome& outcome, const Policy& current,
                const Policy& next, const PolicyTable& base_table,
                const ContextualBandit& bandit,
                RunRecord& record) const override;

 private:
  double learning_rate_;
  std::shared_ptr<const PrivLsOracle> oracle_;
  double radius_;
  double sensitivity_base_;
};

}  // namespace dppo

#endif  // DPPO_DPNPG_NPG_UPDATE_H_
