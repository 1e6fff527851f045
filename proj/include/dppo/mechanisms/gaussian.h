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

#ifndef DPPO_MECHANISMS_GAUSSIAN_H_
#define DPPO_MECHANISMS_GAUSSIAN_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/mechanisms/privacy_params.h"
#include "dppo/mechanisms/rng.h"

namespace dppo {

// Noise variance for the private policy-gradient step with batch size m:
//
//   sigma^2 = 16 log(1.25 / delta) R_max^2 G^2 / (m^2 epsilon^2).
//
// The constant is 16 even though the textbook Gaussian mechanism with the
// replace-one sensitivity 4 R_max G / m gives 32; do not change it without
// also changing the documented calibration.
//
// Returns 0 for epsilon = +infinity. FailedPrecondition when delta = 0 (the
// Gaussian mechanism needs delta > 0); InvalidArgument for m < 1 or
// nonpositive bounds.
absl::StatusOr<double> GaussianNoiseScale(const PrivacyParams& params,
                                          long long batch_size, double r_max,
                                          double g_bound);

// Classic Gaussian-mechanism standard deviation for an L2 sensitivity:
// sensitivity * sqrt(2 log(1.25 / delta)) / epsilon. Zero when epsilon is
// infinite.
absl::StatusOr<double> GaussianMechanismStddev(const PrivacyParams& params,
                                               double l2_sensitivity);

struct GaussianNoiseSpec {
  double sigma_sq;
  int dimension;
};

// vector + N(0, sigma^2 I). InvalidArgument on a dimension mismatch or a
// negative variance.
absl::StatusOr<Eigen::VectorXd> AddGaussianNoise(const Eigen::VectorXd& vector,
                                                 const GaussianNoiseSpec& spec,
                                                 Rng& rng);

}  // namespace dppo

#endif  // DPPO_MECHANISMS_GAUSSIAN_H_
