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

#include "dppo/core/exact.h"

#include <limits>
#include <stdexcept>

namespace dppo {
namespace {

void CheckShape(const PolicyTable& table, const ContextualBandit& bandit) {
  if (table.rows() != bandit.num_states() ||
      table.cols() != bandit.num_actions()) {
    throw std::invalid_argument("policy table shape does not match bandit");
  }
}

}  // namespace

double ExactValue(const PolicyTable& table, const ContextualBandit& bandit) {
  CheckShape(table, bandit);
  double value = 0.0;
  for (int x = 0; x < bandit.num_states(); ++x) {
    value += bandit.rho()(x) * table.row(x).dot(bandit.rewards().row(x));
  }
  return value;
}

double ExactValue(const Policy& policy, const ContextualBandit& bandit) {
  return ExactValue(policy.Table(), bandit);
}

Eigen::MatrixXd AdvantageTable(const PolicyTable& table,
                               const ContextualBandit& bandit) {
  CheckShape(table, bandit);
  Eigen::MatrixXd advantage = bandit.rewards();
  for (int x = 0; x < bandit.num_states(); ++x) {
    const double baseline = table.row(x).dot(bandit.rewards().row(x));
    advantage.row(x).array() -= baseline;
  }
  return advantage;
}

double ExactAdvantage(const Policy& policy, const ContextualBandit& bandit,
                      int state, int action) {
  const Eigen::VectorXd p = policy.ActionProbabilities(state);
  return bandit.reward(state, action) -
         p.dot(bandit.rewards().row(state).transpose());
}

Eigen::VectorXd ExactGradient(const Policy& policy,
                              const ContextualBandit& bandit) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.dim());
  for (int x = 0; x < bandit.num_states(); ++x) {
    if (bandit.rho()(x) == 0.0) continue;
    const Eigen::VectorXd p = policy.ActionProbabilities(x);
    const double baseline = p.dot(bandit.rewards().row(x).transpose());
    for (int y = 0; y < bandit.num_actions(); ++y) {
      const double weight =
          bandit.rho()(x) * p(y) * (bandit.rewards()(x, y) - baseline);
      if (weight != 0.0) grad += weight * policy.Score(x, y);
    }
  }
  return grad;
}

double PerformanceDifference(const PolicyTable& a, const PolicyTable& b,
                             const ContextualBandit& bandit) {
  CheckShape(a, bandit);
  const Eigen::MatrixXd advantage = AdvantageTable(b, bandit);
  double total = 0.0;
  for (int x = 0; x < bandit.num_states(); ++x) {
    total += bandit.rho()(x) * a.row(x).dot(advantage.row(x));
  }
  return total;
}

double CoverageCoefficient(const PolicyTable& target,
                           const PolicyTable& base) {
  if (target.rows() != base.rows() || target.cols() != base.cols()) {
    throw std::invalid_argument("coverage tables differ in shape");
  }
  double worst = 0.0;
  for (Eigen::Index x = 0; x < target.rows(); ++x) {
    for (Eigen::Index y = 0; y < target.cols(); ++y) {
      if (target(x, y) <= 0.0) continue;
      if (base(x, y) <= 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, target(x, y) / base(x, y));
    }
  }
  return worst;
}

}  // namespace dppo
