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

#ifndef DPPO_CORE_BANDIT_H_
#define DPPO_CORE_BANDIT_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace dppo {

// Stochastic policy over a finite instance, one row of action probabilities
// per state.
using PolicyTable = Eigen::MatrixXd;

// A finite contextual bandit. States are drawn from `rho`; the reward of
// action `y` in state `x` is the deterministic entry `rewards(x, y)`, which
// lies in [-r_max, r_max]. Immutable after construction.
class ContextualBandit {
 public:
  // Validates that rho is a probability vector (sum within 1e-12 of one),
  // that every reward is finite and bounded by r_max, and that r_max > 0.
  static absl::StatusOr<ContextualBandit> Create(Eigen::VectorXd rho,
                                                 Eigen::MatrixXd rewards,
                                                 double r_max);

  int num_states() const { return static_cast<int>(rho_.size()); }
  int num_actions() const { return static_cast<int>(rewards_.cols()); }
  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::MatrixXd& rewards() const { return rewards_; }
  double r_max() const { return r_max_; }

  // Throws std::out_of_range on invalid indices.
  double reward(int state, int action) const;

  // Lowest-index maximizer of r(state, .).
  int BestAction(int state) const;

  // J* = sum_x rho(x) max_y r(x, y).
  double OptimalValue() const;

 private:
  ContextualBandit(Eigen::VectorXd rho, Eigen::MatrixXd rewards, double r_max)
      : rho_(std::move(rho)), rewards_(std::move(rewards)), r_max_(r_max) {}

  Eigen::VectorXd rho_;
  Eigen::MatrixXd rewards_;
  double r_max_;
};

// Deterministic table that plays BestAction in every state.
PolicyTable GreedyTable(const ContextualBandit& bandit);

PolicyTable UniformTable(int num_states, int num_actions);

}  // namespace dppo

#endif  // DPPO_CORE_BANDIT_H_
