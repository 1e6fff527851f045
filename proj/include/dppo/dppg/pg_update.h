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

// Noisy REINFORCE step and its log-barrier regularized variant.

#ifndef DPPO_DPPG_PG_UPDATE_H_
#define DPPO_DPPG_PG_UPDATE_H_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"
#include "dppo/mechanisms/rng.h"
#include "dppo/trainer/batch.h"
#include "dppo/trainer/trainer.h"

namespace dppo {

struct PgUpdateSpec {
  double learning_rate = 0.0;   // eta > 0
  double noise_variance = 0.0;  // sigma^2, normally GaussianNoiseScale(...)
  double regularization = 0.0;  // lambda >= 0; 0 disables the barrier
};

// (1/m) sum_i score(x_i, y_i) A_i. InvalidArgument on an empty batch.
absl::StatusOr<Eigen::VectorXd> PgGradientEstimate(const TrajectoryBatch& batch,
                                                   const Policy& policy);

// gradient + (lambda / |X|) (1/|Y| - pi_x) in every state block. The term
// depends on the parameters only, never on data. Tabular softmax only.
absl::StatusOr<Eigen::VectorXd> RegularizedGradient(
    const Eigen::VectorXd& gradient, const Policy& policy, double lambda);

// J_lambda = J + lambda / (|X| |Y|) sum_{x,y} log pi(y|x) + lambda log |Y|,
// i.e. J minus lambda times the state-averaged KL(uniform || pi_x).
absl::StatusOr<double> LogBarrierValue(const Policy& policy,
                                       const ContextualBandit& bandit,
                                       double lambda);
absl::StatusOr<Eigen::VectorXd> ExactLogBarrierGradient(
    const Policy& policy, const ContextualBandit& bandit, double lambda);

// theta + eta (g_hat + N(0, sigma^2 I) + barrier term). The barrier is
// added after the noise; it does not touch the sensitivity.
absl::StatusOr<UpdateOutcome> PgPrivUpdate(const TrajectoryBatch& batch,
                                           const Policy& policy,
                                           const PgUpdateSpec& spec, Rng& rng);

// (1/T) sum_t ||grad J(theta_t)||^2, the expected squared gradient norm of a
// uniformly chosen iterate. InvalidArgument for an empty run.
absl::StatusOr<double> StationarityCertificate(
    const std::vector<RunRecord>& records);

// lambda / (2 |X| |Y|): below this regularized gradient norm the iterate is
// within 2 lambda of optimal.
double CertificateThreshold(const ContextualBandit& bandit, double lambda);

class PgUpdate : public PrivUpdate {
 public:
  // With `stop_at_certificate`, a regularized run halts at the first iterate
  // whose exact ||grad J_lambda|| is at most CertificateThreshold.
  explicit PgUpdate(PgUpdateSpec spec, bool stop_at_certificate = false)
      : spec_(spec), stop_at_certificate_(stop_at_certificate) {}

  std::string_view name() const override {
    return spec_.regularization > 0.0 ? "pg-logbarrier" : "pg";
  }
  const PgUpdateSpec& spec() const { return spec_; }

  absl::StatusOr<UpdateOutcome> Update(const TrajectoryBatch& batch,
                                       const Policy& current,
                                       Rng& rng) const override;
  void Diagnose(const UpdateOutcome& outcome, const Policy& current,
                const Policy& next, const PolicyTable& base_table,
                const ContextualBandit& bandit,
                RunRecord& record) const override;
  bool ShouldStop(const Policy& current, const ContextualBandit& bandit,
                  RunRecord& record) const override;

 private:
  PgUpdateSpec spec_;
  bool stop_at_certificate_;
};

}  // namespace dppo

#endif  // DPPO_DPPG_PG_UPDATE_H_
