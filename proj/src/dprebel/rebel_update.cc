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

#include "dppo/dprebel/rebel_update.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"

namespace dppo {

PrivLsProblem BuildRebelProblem(const TrajectoryBatch& batch,
                                const Policy& policy, double radius,
                                double sensitivity_base) {
  PrivLsProblem problem;
  const Eigen::Index m = static_cast<Eigen::Index>(batch.size());
  problem.data.features.resize(m, policy.dim());
  problem.data.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const TrajectoryRecord& r = batch.records[static_cast<size_t>(i)];
    problem.data.features.row(i) =
        policy.FeatureDifference(r.state, r.action, r.compare_action)
            .transpose();
    problem.data.labels(i) = r.advantage;
  }
  problem.radius = radius;
  problem.sensitivity_base = sensitivity_base;
  problem.feature_bound = 2.0 * policy.features().bound();
  return problem;
}

double RebelEmpiricalLoss(const Eigen::VectorXd& w,
                          const PrivLsProblem& problem) {
  const Eigen::Index m = problem.data.labels.size();
  if (m == 0) return 0.0;
  return (problem.data.features * w - problem.data.labels).squaredNorm() /
         static_cast<double>(m);
}

absl::StatusOr<RebelDiagnostics> ComputeRebelDiagnostics(
    const Policy& prev, const Policy& next, const PolicyTable& base_table,
    double learning_rate, const ContextualBandit& bandit) {
  if (!(learning_rate > 0.0)) {
    return absl::InvalidArgumentError("diagnostics need eta > 0");
  }
  const int nx = bandit.num_states();
  const int ny = bandit.num_actions();
  if (prev.num_states() != nx || prev.num_actions() != ny ||
      next.num_states() != nx || next.num_actions() != ny ||
      base_table.rows() != nx || base_table.cols() != ny) {
    return absl::InvalidArgumentError("policy, base and bandit shapes differ");
  }
  RebelDiagnostics out;
  for (int x = 0; x < nx; ++x) {
    const Eigen::VectorXd pi = prev.ActionProbabilities(x);
    const Eigen::VectorXd mu = base_table.row(x).transpose();
    Eigen::VectorXd f(ny);
    for (int y = 0; y < ny; ++y) {
      f(y) = (next.LogProbability(x, y) - prev.LogProbability(x, y)) /
             learning_rate;
    }
    const Eigen::VectorXd d = f - bandit.rewards().row(x).transpose();
    const double d_pi = pi.dot(d);
    const double d_mu = mu.dot(d);
    const double var_pi = pi.dot((d.array() - d_pi).square().matrix());
    const double var_mu = mu.dot((d.array() - d_mu).square().matrix());
    const double gap = (d_pi - d_mu) * (d_pi - d_mu);
    const double rho = bandit.rho()(x);
    out.pi_centered += rho * var_pi;
    out.mu_centered += rho * var_mu;
    out.centering_gap += rho * gap;
    double pair = 0.0;
    for (int y = 0; y < ny; ++y) {
      for (int y2 = 0; y2 < ny; ++y2) {
        const double diff = d(y) - d(y2);
        pair += mu(y) * pi(y2) * diff * diff;
      }
    }
    out.total_err_sq += rho * pair;
    const double f_pi = pi.dot(f);
    out.max_abs_advantage = std::max(out.max_abs_advantage,
                                     (f.array() - f_pi).abs().maxCoeff());
  }
  return out;
}

double RebelRegretBound(double advantage_bound, long long iterations,
                        int num_actions, double coverage,
                        const std::vector<double>& errors,
                        double coverage_factor) {
  const double t = static_cast<double>(iterations);
  const double sum = std::accumulate(errors.begin(), errors.end(), 0.0);
  return 2.0 * advantage_bound * std::sqrt(std::log(num_actions) / t) +
         std::sqrt(coverage_factor * coverage) / t * sum;
}

absl::StatusOr<UpdateOutcome> RebelPrivUpdate(const TrajectoryBatch& batch,
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
      BuildRebelProblem(batch, policy, radius, sensitivity_base), rng);
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

absl::StatusOr<UpdateOutcome> RebelUpdate::Update(const TrajectoryBatch& batch,
                                                  const Policy& current,
                                                  Rng& rng) const {
  return RebelPrivUpdate(batch, current, learning_rate_, *oracle_, radius_,
                         sensitivity_base_, rng);
}

void RebelUpdate::Diagnose(const UpdateOutcome& /*outcome*/,
                           const Policy& current,
                           const Policy& next, const PolicyTable& base_table,
                           const ContextualBandit& bandit,
                           RunRecord& record) const {
  if (!(learning_rate_ > 0.0)) return;
  auto diag = ComputeRebelDiagnostics(current, next, base_table,
                                      learning_rate_, bandit);
  if (!diag.ok()) return;
  record.est_err = std::sqrt(diag->total_err_sq);
  record.max_abs_advantage = diag->max_abs_advantage;
}

}  // namespace dppo
