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

#include "dppo/trainer/schedule.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dppo/mechanisms/gaussian.h"

namespace dppo {

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kPg:
      return "pg";
    case Algorithm::kPgLogBarrier:
      return "pg-logbarrier";
    case Algorithm::kNpg:
      return "npg";
    case Algorithm::kRebel:
      return "rebel";
  }
  return "unknown";
}

absl::StatusOr<Algorithm> ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kPg, Algorithm::kPgLogBarrier,
                      Algorithm::kNpg, Algorithm::kRebel}) {
    if (AlgorithmName(a) == name) return a;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown algorithm '%s' (expected pg, pg-logbarrier, npg, rebel)",
      std::string(name)));
}

std::string_view OracleName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kExact:
      return "exact";
    case OracleKind::kExpMech:
      return "expmech";
    case OracleKind::kRidge:
      return "ridge";
  }
  return "unknown";
}

absl::StatusOr<OracleKind> ParseOracle(std::string_view name) {
  for (OracleKind k :
       {OracleKind::kExact, OracleKind::kExpMech, OracleKind::kRidge}) {
    if (OracleName(k) == name) return k;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown oracle '%s' (expected exact, expmech, ridge)", std::string(name)));
}

double SensitivityBase(const RunConfig& config,
                       const ContextualBandit& bandit) {
  return config.oracle.sensitivity_base.value_or(2.0 * bandit.r_max());
}

double AdvantageBound(const RunConfig& config, const ContextualBandit& bandit) {
  return config.advantage_bound.value_or(2.0 * bandit.r_max());
}

absl::StatusOr<Schedule> AutoSchedule(const RunConfig& config,
                                      const PolicyConstants& constants,
                                      const ContextualBandit& bandit,
                                      int dim) {
  const auto& n = config.total_samples;
  const auto& m = config.batch_size;
  const auto& t = config.iterations;
  if ((n && *n < 0) || (m && *m < 1) || (t && *t < 0)) {
    return absl::InvalidArgumentError(
        "need N >= 0, m >= 1 and T >= 0 where given");
  }
  if (n && m && t && *n != *m * *t) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "inconsistent schedule: N = %d but m * T = %d * %d = %d", *n, *m, *t,
        *m * *t));
  }

  Schedule s;
  if (m) {
    s.batch_size = *m;
  } else if (n && t) {
    if (*t == 0 || *n % *t != 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "cannot split N = %d into T = %d equal batches", *n, *t));
    }
    s.batch_size = std::max<long long>(1, *n / *t);
  } else if (n) {
    const double eps = config.privacy.epsilon;
    const double inv_eps = std::isinf(eps) ? 0.0 : 1.0 / eps;
    const double raw = std::pow(inv_eps, 2.0 / 3.0) *
                       std::cbrt(static_cast<double>(*n) * dim);
    s.batch_size = std::max<long long>(1, static_cast<long long>(raw));
  } else {
    return absl::InvalidArgumentError(
        "schedule needs total_samples or batch_size");
  }
  if (t) {
    s.iterations = *t;
  } else if (n) {
    s.iterations = *n / s.batch_size;
  } else {
    return absl::InvalidArgumentError(
        "schedule needs total_samples or iterations");
  }
  s.total_samples = s.batch_size * s.iterations;

  const bool gradient_based = config.algorithm == Algorithm::kPg ||
                              config.algorithm == Algorithm::kPgLogBarrier;
  if (gradient_based) {
    auto sigma_sq = GaussianNoiseScale(config.privacy, s.batch_size,
                                       bandit.r_max(), constants.g_bound);
    if (!sigma_sq.ok()) return sigma_sq.status();
    s.noise_variance = *sigma_sq;
  }

  if (config.learning_rate) {
    if (!(*config.learning_rate >= 0.0)) {
      return absl::InvalidArgumentError("learning rate must be nonnegative");
    }
    s.learning_rate = *config.learning_rate;
    return s;
  }

  const double num_actions = bandit.num_actions();
  const double iters = static_cast<double>(s.iterations);
  const double kInf = std::numeric_limits<double>::infinity();
  switch (config.algorithm) {
    case Algorithm::kPg:
    case Algorithm::kPgLogBarrier: {
      const double mm = static_cast<double>(s.batch_size);
      const double r_max = bandit.r_max();
      const double g = constants.g_bound;
      const double l = constants.smoothness;
      const double b = 1.0 - 1.0 / mm;
      double c;
      if (config.algorithm == Algorithm::kPg) {
        c = 4.0 * r_max * r_max * g * g / mm + dim * s.noise_variance;
      } else {
        const double lambda = config.regularization;
        c = 2.0 / mm * (1.0 - 1.0 / num_actions) *
                (4.0 * r_max * r_max + lambda * lambda / bandit.num_states()) +
            dim * s.noise_variance;
      }
      const double delta_1 = 2.0 * r_max;
      const double curvature_cap = b > 0.0 ? 1.0 / (l * b) : kInf;
      const double balance =
          (iters > 0.0 && c > 0.0) ? std::sqrt(2.0 * delta_1 / (iters * l * c))
                                   : kInf;
      s.learning_rate = std::min(curvature_cap, balance);
      if (std::isinf(s.learning_rate)) s.learning_rate = 1.0 / l;
      break;
    }
    case Algorithm::kNpg: {
      const double w = config.oracle.radius;
      s.learning_rate =
          iters > 0.0
              ? std::sqrt(2.0 * std::log(num_actions) /
                          (iters * constants.beta * w * w))
              : 0.0;
      break;
    }
    case Algorithm::kRebel: {
      const double a = AdvantageBound(config, bandit);
      s.learning_rate =
          iters > 0.0 ? std::sqrt(std::log(num_actions) / (a * a * iters))
                      : 0.0;
      break;
    }
  }
  return s;
}

}  // namespace dppo
