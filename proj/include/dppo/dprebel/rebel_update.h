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

// REBEL: regress relative log-ratio differences on reward differences.
//
// For softmax policies with linear logits the log-ratio of theta_t + eta w
// to theta_t between two actions of one state is eta w . (phi_y - phi_y'),
// the state normalizers cancelling. The step therefore reduces to linear
// least squares of A_i on the difference features, and theta_{t+1} =
// theta_t + eta w_t.

#ifndef DPPO_DPREBEL_REBEL_UPDATE_H_
#define DPPO_DPREBEL_REBEL_UPDATE_H_

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

// One row per record: phi(x_i, y_i) - phi(x_i, y'_i), label A_i. The
// feature bound is 2B.
PrivLsProblem BuildRebelProblem(const TrajectoryBatch& batch,
                                const Policy& policy, double radius,
                                double sensitivity_base);

// (1/m) sum_i (w . dphi_i - A_i)^2.
double RebelEmpiricalLoss(const Eigen::VectorXd& w,
                          const PrivLsProblem& problem);

// Exact population diagnostics of one step, with f(x, y) = (1/eta)
// log(pi_next / pi_prev)(y|x) and D = f - r:
//   total           E_{x, y ~ mu, y' ~ pi_prev}[(D(x,y) - D(x,y'))^2]
//   pi_centered     E_{x, y ~ pi_prev}[(D - E_{pi_prev} D)^2]
//   mu_centered     E_{x, y ~ mu}[(D - E_mu D)^2]
//   centering_gap   E_x[(E_{pi_prev} D - E_mu D)^2]
// The three components sum to the total. max_abs_advantage is
// max_{x,y} |f(x,y) - E_{pi_prev} f(x,.)|.
struct RebelDiagnostics {
  double total_err_sq = 0.0;
  double pi_centered = 0.0;
  double mu_centered = 0.0;
  double centering_gap = 0.0;
  double max_abs_advantage = 0.0;
};

// InvalidArgument for eta <= 0 or mismatched shapes.
absl::StatusOr<RebelDiagnostics> ComputeRebelDiagnostics(
    const Policy& prev, const Policy& next, const PolicyTable& base_table,
    double learning_rate, const ContextualBandit& bandit);

// 2A sqrt(log|Y| / T) + (sqrt(c C) / T) sum_t err_t, with c = 10 for a
// general base policy and c = 2 when mu = pi_t.
double RebelRegretBound(double advantage_bound, long long iterations,
                        int num_actions, double coverage,
                        const std::vector<double>& errors,
                        double coverage_factor = 10.0);

// theta + eta w with w from the oracle.
absl::StatusOr<UpdateOutcome> RebelPrivUpdate(const TrajectoryBatch& batch,
                                              const Policy& policy,
                                              double learning_rate,
                                              const PrivLsOracle& oracle,
                                              double radius,
                                              double sensitivity_base,
                                              Rng& rng);

class RebelUpdate : public PrivUpdate {
 public:
  RebelUpdate(double learning_rate, std::shared_ptr<const PrivLsOracle> oracle,
              double radius, double sensitivity_base)
      : learning_rate_(learning_rate),
        oracle_(std::move(oracle)),
        radius_(radius),
        sensitivity_base_(sensitivity_base) {}

  std::string_view name() const override { return "rebel"; }
  double learning_rate() const { return learning_rate_; }

  absl::StatusOr<UpdateOutcome> Update(const TrajectoryBatch& batch,
                                       const Policy& current,
                                       Rng& rng) const override;
  // est_err = sqrt(total_err_sq); also records max |A_t|.
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

#endif  // DPPO_DPREBEL_REBEL_UPDATE_H_
