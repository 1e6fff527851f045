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

// Exact-expectation oracles. Every quantity here is computed by full
// enumeration over the finite instance and serves as ground truth for the
// sampled estimators elsewhere in the library.

#ifndef DPPO_CORE_EXACT_H_
#define DPPO_CORE_EXACT_H_

#include <Eigen/Dense>

#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"

namespace dppo {

// J = sum_x rho(x) sum_y pi(y|x) r(x, y).
double ExactValue(const PolicyTable& table, const ContextualBandit& bandit);
double ExactValue(const Policy& policy, const ContextualBandit& bandit);

// A^pi(x, y) = r(x, y) - sum_y' pi(y'|x) r(x, y') for every (x, y).
Eigen::MatrixXd AdvantageTable(const PolicyTable& table,
                               const ContextualBandit& bandit);

double ExactAdvantage(const Policy& policy, const ContextualBandit& bandit,
                      int state, int action);

// grad J(theta) = E_{x ~ rho, y ~ pi}[A^pi(x, y) score(x, y)].
Eigen::VectorXd ExactGradient(const Policy& policy,
                              const ContextualBandit& bandit);

// E_{x ~ rho, y ~ a}[A^b(x, y)], which equals J(a) - J(b).
double PerformanceDifference(const PolicyTable& a, const PolicyTable& b,
                             const ContextualBandit& bandit);

// C_{base -> target} = max over (x, y) with target(y|x) > 0 of
// target(y|x) / base(y|x). Returns +infinity when the base puts zero mass
// where the target does not. Throws std::invalid_argument on shape mismatch.
double CoverageCoefficient(const PolicyTable& target, const PolicyTable& base);

}  // namespace dppo

#endif  // DPPO_CORE_EXACT_H_
