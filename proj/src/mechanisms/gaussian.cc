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

#include "dppo/mechanisms/gaussian.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

absl::StatusOr<double> GaussianNoiseScale(const PrivacyParams& params,
                                          long long batch_size, double r_max,
                                          double g_bound) {
  if (batch_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batch size must be >= 1, got %d", batch_size));
  }
  if (!(r_max > 0.0) || !(g_bound >= 0.0)) {
    return absl::InvalidArgumentError("r_max must be positive, G nonnegative");
  }
  if (!params.is_private()) return 0.0;
  if (params.delta <= 0.0) {
    return absl::FailedPreconditionError(
        "the Gaussian mechanism needs delta > 0; use the exponential "
        "mechanism for pure DP");
  }
  const double m = static_cast<double>(batch_size);
  return 16.0 * std::log(1.25 / params.delta) * r_max * r_max * g_bound *
         g_bound / (m * m * params.epsilon * params.epsilon);
}

absl::StatusOr<double> GaussianMechanismStddev(const PrivacyParams& params,
                                               double l2_sensitivity) {
  if (!(l2_sensitivity >= 0.0)) {
    return absl::InvalidArgumentError("sensitivity must be nonnegative");
  }
  if (!params.is_private()) return 0.0;
  if (params.delta <= 0.0) {
    return absl::FailedPreconditionError(
        "the Gaussian mechanism needs delta > 0");
  }
  return l2_sensitivity * std::sqrt(2.0 * std::log(1.25 / params.delta)) /
         params.epsilon;
}

absl::StatusOr<Eigen::VectorXd> AddGaussianNoise(const Eigen::VectorXd& vector,
                                                 const GaussianNoiseSpec& spec,
                                                 Rng& rng) {
  if (spec.dimension != vector.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise dimension %d does not match vector length %d",
                        spec.dimension, vector.size()));
  }
  if (!(spec.sigma_sq >= 0.0)) {
    return absl::InvalidArgumentError("sigma^2 must be nonnegative");
  }
  Eigen::VectorXd out = vector;
  if (spec.sigma_sq == 0.0) return out;
  const double sigma = std::sqrt(spec.sigma_sq);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sigma * rng.Normal();
  return out;
}

}  // namespace dppo
