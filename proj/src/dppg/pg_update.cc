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

#include "dppo/dppg/pg_update.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dppo/core/exact.h"
#include "dppo/mechanisms/gaussian.h"

namespace dppo {

absl::StatusOr<Eigen::VectorXd> PgGradientEstimate(const TrajectoryBatch& batch,
                                                   const Policy& policy) {
  if (batch.empty()) {
    return absl::InvalidArgumentError("gradient estimate needs a nonempty batch");
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.dim());
  for (const TrajectoryRecord& r : batch.records) {
    if (r.advantage == 0.0) continue;
    grad += r.advantage * policy.Score(r.state, r.action);
  }
  return grad / static_cast<double>(batch.size());
}

absl::StatusOr<Eigen::VectorXd> RegularizedGradient(
    const Eigen::VectorXd& gradient, const Policy& policy, double lambda) {
  if (policy.family() != PolicyFamily::kTabularSoftmax) {
    return absl::InvalidArgumentError(
        "the log-barrier regularizer is defined for tabular softmax only");
  }
  if (gradient.size() != policy.dim()) {
    return absl::InvalidArgumentError("gradient has the wrong dimension");
  }
  if (!(lambda >= 0.0)) {
    return absl::InvalidArgumentError("lambda must be nonnegative");
  }
  Eigen::VectorXd out = gradient;
  if (lambda == 0.0) return out;
  const int ny = policy.num_actions();
  const double scale = lambda / policy.num_states();
  for (int x = 0; x < policy.num_states(); ++x) {
    const Eigen::VectorXd p = policy.ActionProbabilities(x);
    out.segment(static_cast<Eigen::Index>(x) * ny, ny).array() +=
        scale * (1.0 / ny - p.array());
  }
  return out;
}

absl::StatusOr<double> LogBarrierValue(const Policy& policy,
                                       const ContextualBandit& bandit,
                                       double lambda) {
  if (policy.family() != PolicyFamily::kTabularSoftmax) {
    return absl::InvalidArgumentError(
        "the log-barrier objective is defined for tabular softmax only");
  }
  const int nx = policy.num_states();
  const int ny = policy.num_actions();
  double log_sum = 0.0;
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) log_sum += policy.LogProbability(x, y);
  }
  return ExactValue(policy, bandit) + lambda / (nx * ny) * log_sum +
         lambda * std::log(static_cast<double>(ny));
}

absl::StatusOr<Eigen::VectorXd> ExactLogBarrierGradient(
    const Policy& policy, const ContextualBandit& bandit, double lambda) {
  return RegularizedGradient(ExactGradient(policy, bandit), policy, lambda);
}

absl::StatusOr<UpdateOutcome> PgPrivUpdate(const TrajectoryBatch& batch,
                                           const Policy& policy,
                                           const PgUpdateSpec& spec, Rng& rng) {
  if (!(spec.learning_rate >= 0.0) || !(spec.noise_variance >= 0.0) ||
      !(spec.regularization >= 0.0)) {
    return absl::InvalidArgumentError(
        "PG step needs eta, sigma^2 and lambda nonnegative");
  }
  auto estimate = PgGradientEstimate(batch, policy);
  if (!estimate.ok()) return estimate.status();
  auto noisy = AddGaussianNoise(
      *estimate, GaussianNoiseSpec{spec.noise_variance, policy.dim()}, rng);
  if (!noisy.ok()) return noisy.status();
  Eigen::VectorXd direction = *std::move(noisy);
  if (spec.regularization > 0.0) {
    auto regularized =
        RegularizedGradient(direction, policy, spec.regularization);
    if (!regularized.ok()) return regularized.status();
    direction = *std::move(regularized);
  }
  UpdateOutcome outcome;
  outcome.next_theta = policy.theta() + spec.learning_rate * direction;
  outcome.direction = std::move(direction);
  return outcome;
}

absl::StatusOr<double> StationarityCertificate(
    const std::vector<RunRecord>& records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("certificate of an empty run");
  }
  double total = 0.0;
  for (const RunRecord& r : records) total += r.grad_norm * r.grad_norm;
  return total / static_cast<double>(records.size());
}

double CertificateThreshold(const ContextualBandit& bandit, double lambda) {
  return lambda / (2.0 * bandit.num_states() * bandit.num_actions());
}

absl::StatusOr<UpdateOutcome> PgUpdate::Update(const TrajectoryBatch& batch,
                                               const Policy& current,
                                               Rng& rng) const {
  return PgPrivUpdate(batch, current, spec_, rng);
}

void PgUpdate::Diagnose(const UpdateOutcome& /*outcome*/,
                        const Policy& /*current*/, const Policy& /*next*/,
                        const PolicyTable& /*base_table*/,
                        const ContextualBandit& /*bandit*/,
                        RunRecord& record) const {
  record.noise_variance = spec_.noise_variance;
}

bool PgUpdate::ShouldStop(const Policy& current, const ContextualBandit& bandit,
                          RunRecord& record) const {
  if (spec_.regularization <= 0.0 ||
      current.family() != PolicyFamily::kTabularSoftmax) {
    return false;
  }
  auto grad = ExactLogBarrierGradient(current, bandit, spec_.regularization);
  if (!grad.ok()) return false;
  record.regularized_grad_norm = grad->norm();
  return stop_at_certificate_ &&
         *record.regularized_grad_norm <=
             CertificateThreshold(bandit, spec_.regularization);
}

}  // namespace dppo
