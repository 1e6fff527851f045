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

#include "dppo/dpnpg/privls.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dppo/mechanisms/gaussian.h"

namespace dppo {
namespace {

absl::Status ValidateProblem(const PrivLsProblem& p) {
  if (p.data.features.rows() != p.data.labels.size()) {
    return absl::InvalidArgumentError("feature and label counts differ");
  }
  if (p.data.features.cols() < 1) {
    return absl::InvalidArgumentError("regression needs dimension >= 1");
  }
  if (!(p.radius > 0.0) || !(p.sensitivity_base > 0.0) ||
      !(p.feature_bound > 0.0)) {
    return absl::InvalidArgumentError(
        "radius, sensitivity base and feature bound must be positive");
  }
  return absl::OkStatus();
}

PrivLsResult Finish(Eigen::VectorXd w, double radius) {
  PrivLsResult result;
  result.pre_projection_norm = w.norm();
  result.w = ProjectToBall(w, radius);
  return result;
}

}  // namespace

Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& w, double radius) {
  const double norm = w.norm();
  if (norm <= radius) return w;
  return w * (radius / norm);
}

absl::StatusOr<PrivLsResult> ExactLeastSquaresOracle::Solve(
    const PrivLsProblem& problem, Rng&) const {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  const int dim = static_cast<int>(problem.data.features.cols());
  if (problem.data.features.rows() == 0) {
    return Finish(Eigen::VectorXd::Zero(dim), problem.radius);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
      problem.data.features);
  return Finish(cod.solve(problem.data.labels), problem.radius);
}

absl::StatusOr<std::shared_ptr<const CandidateSet>>
ExponentialMechanismOracle::Candidates(int dim, double radius,
                                       double sensitivity_base) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto key = std::make_tuple(dim, radius, sensitivity_base);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto set = CandidateSet::Lattice(dim, radius, points_per_axis_,
                                   sensitivity_base);
  if (!set.ok()) return set.status();
  auto shared = std::make_shared<const CandidateSet>(*std::move(set));
  cache_.emplace(key, shared);
  return shared;
}

absl::StatusOr<PrivLsResult> ExponentialMechanismOracle::Solve(
    const PrivLsProblem& problem, Rng& rng) const {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  auto candidates =
      Candidates(static_cast<int>(problem.data.features.cols()),
                 problem.radius, problem.sensitivity_base);
  if (!candidates.ok()) return candidates.status();
  const CandidateSet& set = **candidates;
  const Eigen::VectorXd losses = CandidateLosses(set, problem.data);
  auto index = ExponentialMechanismSample(set, losses, epsilon_,
                                          problem.sensitivity_base, rng);
  if (!index.ok()) return index.status();
  return Finish(set[*index], problem.radius);
}

double RidgeGaussianOracle::Sensitivity(double feature_bound,
                                        double label_bound) {
  return 2.0 * feature_bound *
         std::sqrt(feature_bound * feature_bound + label_bound * label_bound);
}

absl::StatusOr<PrivLsResult> RidgeGaussianOracle::Solve(
    const PrivLsProblem& problem, Rng& rng) const {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  if (!(ridge_ >= 0.0)) {
    return absl::InvalidArgumentError("ridge must be nonnegative");
  }
  const Eigen::Index m = problem.data.features.rows();
  const Eigen::Index d = problem.data.features.cols();
  if (m == 0) return absl::InvalidArgumentError("empty regression problem");

  // Clip so that the declared sensitivity holds for arbitrary inputs.
  Eigen::MatrixXd x = problem.data.features;
  Eigen::VectorXd z = problem.data.labels.cwiseMax(-problem.sensitivity_base)
                          .cwiseMin(problem.sensitivity_base);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double norm = x.row(i).norm();
    if (norm > problem.feature_bound) x.row(i) *= problem.feature_bound / norm;
  }

  auto stddev = GaussianMechanismStddev(
      params_, Sensitivity(problem.feature_bound, problem.sensitivity_base));
  if (!stddev.ok()) return stddev.status();

  Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::VectorXd moment = x.transpose() * z;
  if (*stddev > 0.0) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        gram(i, j) += *stddev * rng.Normal();
        gram(j, i) = gram(i, j);
      }
    }
    for (Eigen::Index i = 0; i < d; ++i) moment(i) += *stddev * rng.Normal();
  }
  gram /= static_cast<double>(m);
  moment /= static_cast<double>(m);

  double ridge = ridge_;
  double tried = ridge;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    tried = ridge;
    Eigen::MatrixXd system = gram;
    system.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    const double scale = std::max(1.0, system.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        ldlt.vectorD().minCoeff() > 1e-12 * scale) {
      return Finish(ldlt.solve(moment), problem.radius);
    }
    ridge = ridge > 0.0 ? ridge * 10.0 : 1e-6;
  }
  return absl::FailedPreconditionError(absl::StrFormat(
      "noisy normal equations are not positive definite at ridge %g; "
      "retry with a larger ridge",
      tried));
}

}  // namespace dppo
