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

#include "dppo/core/bandit.h"

#include <cmath>
#include <stdexcept>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

absl::StatusOr<ContextualBandit> ContextualBandit::Create(
    Eigen::VectorXd rho, Eigen::MatrixXd rewards, double r_max) {
  if (rho.size() == 0) {
    return absl::InvalidArgumentError("num_states must be positive");
  }
  if (rewards.cols() == 0) {
    return absl::InvalidArgumentError("num_actions must be positive");
  }
  if (rewards.rows() != rho.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("reward table has %d rows but rho has %d entries",
                        rewards.rows(), rho.size()));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    return absl::InvalidArgumentError("r_max must be positive and finite");
  }
  double total = 0.0;
  for (Eigen::Index x = 0; x < rho.size(); ++x) {
    if (!std::isfinite(rho(x)) || rho(x) < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("rho[%d] = %g is not a probability", x, rho(x)));
    }
    total += rho(x);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rho sums to %.17g, expected 1", total));
  }
  for (Eigen::Index x = 0; x < rewards.rows(); ++x) {
    for (Eigen::Index y = 0; y < rewards.cols(); ++y) {
      const double r = rewards(x, y);
      if (!std::isfinite(r) || std::abs(r) > r_max) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "reward(%d, %d) = %g outside [-r_max, r_max] with r_max = %g", x,
            y, r, r_max));
      }
    }
  }
  return ContextualBandit(std::move(rho), std::move(rewards), r_max);
}

double ContextualBandit::reward(int state, int action) const {
  if (state < 0 || state >= num_states() || action < 0 ||
      action >= num_actions()) {
    throw std::out_of_range(
        absl::StrFormat("(state, action) = (%d, %d) out of range", state,
                        action));
  }
  return rewards_(state, action);
}

int ContextualBandit::BestAction(int state) const {
  if (state < 0 || state >= num_states()) {
    throw std::out_of_range(absl::StrFormat("state %d out of range", state));
  }
  int best = 0;
  for (int y = 1; y < num_actions(); ++y) {
    if (rewards_(state, y) > rewards_(state, best)) best = y;
  }
  return best;
}

double ContextualBandit::OptimalValue() const {
  double value = 0.0;
  for (int x = 0; x < num_states(); ++x) {
    value += rho_(x) * rewards_.row(x).maxCoeff();
  }
  return value;
}

PolicyTable GreedyTable(const ContextualBandit& bandit) {
  PolicyTable table =
      PolicyTable::Zero(bandit.num_states(), bandit.num_actions());
  for (int x = 0; x < bandit.num_states(); ++x) {
    table(x, bandit.BestAction(x)) = 1.0;
  }
  return table;
}

PolicyTable UniformTable(int num_states, int num_actions) {
  return PolicyTable::Constant(num_states, num_actions, 1.0 / num_actions);
}

}  // namespace dppo
