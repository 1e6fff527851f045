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

#include "dppo/dpnpg/npg_update.h"

#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "dppo/core/exact.h"

namespace dppo {
namespace {

double MeanError(const std::vector<double>& errors) {
  if (errors.empty()) return 0.0;
  return std::accumulate(errors.begin(), errors.end(), 0.0) /
         static_cast<double>(errors.size());
}

}  // namespace

PrivLsProblem BuildLsProblem(const TrajectoryBatch& batch,
                             const Policy& policy, double radius,
                             double sensitivity_base) {
  PrivLsProblem problem;
  const Eigen::Index m = static_cast<Eigen::Index>(batch.size());
  problem.data.features.resize(m, policy.dim());
  problem.data.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const TrajectoryRecord& r = batch.records[static_cast<size_t>(i)];
    problem.data.features.row(i) = policy.Score(r.state, r.action).transpose();
    problem.data.labels(i) = r.advantage;
  }
  problem.radius = radius;
  problem.sensitivity_base = sensitivity_base;
  problem.feature_bound = 2.0 * policy.features().bound();
  return problem;
}

double NpgPopulationError(const Eigen::VectorXd& w, const Policy& policy,
                          const PolicyTable& base_table,
                          const ContextualBandit& bandit) {
  const Eigen::MatrixXd advantage = AdvantageTable(policy.Table(), bandit);
  double total = 0.0;
  for (int x = 0; x < bandit.num_states(); ++x) {
    if (bandit.rho()(x) == 0.0) continue;
    for (int y = 0; y < bandit.num_actions(); ++y) {
      if (base_table(x, y) == 0.0) continue;
      const double residual = advantage(x, y) - w.dot(policy.Score(x, y));
      total += bandit.rho()(x) * base_table(x, y) * residual * residual;
    }
  }
  return total;
}

absl::StatusOr<UpdateOutcome> NpgPrivUpdate(const TrajectoryBatch& batch,
                                            const Policy& policy,
                                            double learning_rate,
                                            const PrivLsOracle& oracle,
                                            double radius,
                                            double sensitivity_base,
                                            Rng& rng) {
  if (!(learning_rate >= 0.0)) {
    return absl::InvalidArgumentError("learning rate must be nonnegative");
  }
  auto solved = oracle.Solve(
      BuildLsProblem(batch, policy, radius, sensitivity_base), rng);
  if (!solved.ok()) return solved.status();
  if (solved->w.size() != policy.dim()) {
    return absl::InternalError("oracle returned a vector of the wrong size");
  }
  UpdateOutcome outcome;
  outcome.next_theta = policy.theta() + learning_rate * solved->w;
  outcome.direction = std::move(solved->w);
  outcome.pre_projection_norm = solved->pre_projection_norm;
  return outcome;
}

double NpgRegretBound(double beta, double radius, long long iterations,
                      int num_actions, double coverage,
                      const std::vector<double>& errors) {
  const double t = static_cast<double>(iterations);
  return std::sqrt(beta * radius * radius * std::log(num_actions) / (2.0 * t)) +
         std::sqrt(coverage) * MeanError(errors);
}

double NpgRegretBoundFromStep(double beta, double radius,
                              long long iterations, int num_actions,
                              double coverage,
                              const std::vector<double>& errors) {
  const double t = static_cast<double>(iterations);
  return std::sqrt(2.0 * beta * radius * radius * std::log(num_actions) / t) +
         std::sqrt(coverage) * MeanError(errors);
}

absl::StatusOr<UpdateOutcome> NpgUpdate::Update(const TrajectoryBatch& batch,
                                                const Policy& current,
                                                Rng& rng) const {
  return NpgPrivUpdate(batch, current, learning_rate_, *oracle_, radius_,
                       sensitivity_base_, rng);
}

void NpgUpdate::Diagnose(const UpdateOutcome& outcome, const Policy& current,
                         const Policy& /*next*/, const PolicyTable& base_table,
                         const ContextualBandit& bandit,
                         RunRecord& record) const {
  record.est_err = std::sqrt(
      NpgPopulationError(outcome.direction, current, base_table, bandit));
}

}  // namespace dppo
