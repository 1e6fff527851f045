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

#ifndef DPPO_TRAINER_SCHEDULE_H_
#define DPPO_TRAINER_SCHEDULE_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"
#include "dppo/mechanisms/privacy_params.h"
#include "dppo/trainer/batch.h"

namespace dppo {

enum class Algorithm { kPg, kPgLogBarrier, kNpg, kRebel };

std::string_view AlgorithmName(Algorithm algorithm);
absl::StatusOr<Algorithm> ParseAlgorithm(std::string_view name);

// Private least-squares oracle used by the regression-based updates.
enum class OracleKind { kExact, kExpMech, kRidge };

std::string_view OracleName(OracleKind kind);
absl::StatusOr<OracleKind> ParseOracle(std::string_view name);

struct OracleOptions {
  OracleKind kind = OracleKind::kExact;
  // W: every returned w_t is projected onto the ball of this radius.
  double radius = 1.0;
  // Lattice resolution for the exponential mechanism.
  int grid_points = 9;
  // Ridge added to the (noisy) Gram matrix.
  double ridge = 1e-3;
  // R for clamping and the exponential-mechanism temperature; defaults to
  // 2 r_max, the range of the advantage estimates.
  std::optional<double> sensitivity_base;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kPg;
  // N = m * T. Missing values are filled by AutoSchedule.
  std::optional<long long> total_samples;
  std::optional<long long> batch_size;
  std::optional<long long> iterations;
  std::optional<double> learning_rate;
  PrivacyParams privacy = PrivacyParams::NonPrivate();
  BasePolicy base_policy = BasePolicy::OnPolicy();
  // lambda of the log-barrier objective.
  double regularization = 0.0;
  std::uint64_t seed = 0;
  OracleOptions oracle;
  // A in the REBEL step size; defaults to 2 r_max.
  std::optional<double> advantage_bound;
  // Stop a log-barrier run once ||grad J_lambda|| <= lambda / (2 |X| |Y|).
  bool stop_at_certificate = false;
  // zeta; reported only, never used in control flow.
  double failure_probability = 0.05;
};

struct Schedule {
  long long batch_size = 0;
  long long iterations = 0;
  long long total_samples = 0;
  double learning_rate = 0.0;
  // sigma^2 of the gradient noise (policy-gradient algorithms only).
  double noise_variance = 0.0;
};

double SensitivityBase(const RunConfig& config, const ContextualBandit& bandit);
double AdvantageBound(const RunConfig& config, const ContextualBandit& bandit);

// Resolves (m, T, eta) from a config:
//
//  * m = max(1, floor((1/eps)^(2/3) (N d)^(1/3))) when only N is given,
//    m = N / T when N and T are, T = floor(N / m) when T is missing;
//  * policy gradient: eta = min(1 / (L B), sqrt(2 delta_1 / (T L C))) with
//    B = 1 - 1/m, C = 4 R_max^2 G^2 / m + d sigma^2 and the conservative
//    delta_1 = 2 R_max; the log-barrier variant uses its regularized C;
//  * NPG: eta = sqrt(2 log|Y| / (T beta W^2));
//  * REBEL: eta = sqrt(log|Y| / (A^2 T)).
//
// InvalidArgument when N, m and T are all given and N != m T, or when the
// config lacks the values needed to fill the rest.
absl::StatusOr<Schedule> AutoSchedule(const RunConfig& config,
                                      const PolicyConstants& constants,
                                      const ContextualBandit& bandit,
                                      int dim);

}  // namespace dppo

#endif  // DPPO_TRAINER_SCHEDULE_H_
