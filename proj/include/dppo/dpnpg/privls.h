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

// Private least-squares oracles shared by the NPG and REBEL updates.

#ifndef DPPO_DPNPG_PRIVLS_H_
#define DPPO_DPNPG_PRIVLS_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <tuple>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/mechanisms/exponential.h"
#include "dppo/mechanisms/privacy_params.h"
#include "dppo/mechanisms/rng.h"

namespace dppo {

// min_w sum_i (w . x_i - z_i)^2 over the ball ||w|| <= radius.
struct PrivLsProblem {
  LsDataset data;
  double radius = 1.0;            // W
  double sensitivity_base = 2.0;  // R; labels lie in [-R, R]
  double feature_bound = 2.0;     // every ||x_i|| <= feature_bound
};

struct PrivLsResult {
  Eigen::VectorXd w;  // ||w|| <= radius
  double pre_projection_norm = 0.0;
  // Exact population error, filled by callers that can enumerate.
  std::optional<double> measured_err;
};

// Scales w onto the ball of the given radius when it lies outside.
Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& w, double radius);

class PrivLsOracle {
 public:
  virtual ~PrivLsOracle() = default;
  virtual std::string_view name() const = 0;
  virtual absl::StatusOr<PrivLsResult> Solve(const PrivLsProblem& problem,
                                             Rng& rng) const = 0;
};

// Non-private reference: the minimum-norm least-squares solution, projected.
class ExactLeastSquaresOracle : public PrivLsOracle {
 public:
  std::string_view name() const override { return "exact"; }
  absl::StatusOr<PrivLsResult> Solve(const PrivLsProblem& problem,
                                     Rng& rng) const override;
};

// Exponential mechanism over a lattice in the W-ball, scored by the clamped
// squared loss. Pure epsilon-DP; epsilon = +infinity selects the empirical
// minimizer (lowest index on ties).
class ExponentialMechanismOracle : public PrivLsOracle {
 public:
  ExponentialMechanismOracle(double epsilon, int points_per_axis)
      : epsilon_(epsilon), points_per_axis_(points_per_axis) {}

  std::string_view name() const override { return "expmech"; }
  absl::StatusOr<PrivLsResult> Solve(const PrivLsProblem& problem,
                                     Rng& rng) const override;

 private:
  absl::StatusOr<std::shared_ptr<const CandidateSet>> Candidates(
      int dim, double radius, double sensitivity_base) const;

  double epsilon_;
  int points_per_axis_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<int, double, double>,
                   std::shared_ptr<const CandidateSet>>
      cache_;
};

// Sufficient-statistics perturbation: features are clipped to the feature
// bound C and labels to R, Gaussian noise calibrated to the joint replace-one
// sensitivity 2 C sqrt(C^2 + R^2) is added to the upper triangle of X^T X
// (mirrored) and to X^T z, and (X^T X / m + ridge I) w = X^T z / m is solved.
//
// An indefinite or singular noisy system is FailedPrecondition. With
// `max_retries` > 0 the ridge is multiplied by 10 and the solve repeated on
// the same noisy statistics (post-processing, so privacy is unaffected).
class RidgeGaussianOracle : public PrivLsOracle {
 public:
  RidgeGaussianOracle(PrivacyParams params, double ridge, int max_retries = 6)
      : params_(params), ridge_(ridge), max_retries_(max_retries) {}

  std::string_view name() const override { return "ridge"; }
  absl::StatusOr<PrivLsResult> Solve(const PrivLsProblem& problem,
                                     Rng& rng) const override;

  // Joint L2 sensitivity of (X^T X, X^T z) under replacing one record.
  static double Sensitivity(double feature_bound, double label_bound);

 private:
  PrivacyParams params_;
  double ridge_;
  int max_retries_;
};

}  // namespace dppo

#endif  // DPPO_DPNPG_PRIVLS_H_
