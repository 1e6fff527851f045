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

// Exponential mechanism over a finite class of linear predictors, scored by
// a clamped least-squares loss.

#ifndef DPPO_MECHANISMS_EXPONENTIAL_H_
#define DPPO_MECHANISMS_EXPONENTIAL_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/mechanisms/rng.h"

namespace dppo {

// Finite candidate class W of weight vectors inside the ball of radius W.
// `prediction_bound` is R: predictions and labels are clamped to [-R, R]
// before the loss is evaluated, so one record moves the loss by at most 4R^2.
class CandidateSet {
 public:
  // Validates a nonempty, duplicate-free list of equal-length vectors with
  // norms <= radius.
  static absl::StatusOr<CandidateSet> Create(
      std::vector<Eigen::VectorXd> candidates, double radius,
      double prediction_bound);

  // The lattice {-W + 2W i / (k - 1) : i < k}^d intersected with the W-ball
  // (k odd keeps the origin). Fails when k^d exceeds `max_candidates`.
  static absl::StatusOr<CandidateSet> Lattice(int dim, double radius,
                                              int points_per_axis,
                                              double prediction_bound,
                                              size_t max_candidates = 1u << 21);

  size_t size() const { return candidates_.size(); }
  int dim() const { return static_cast<int>(candidates_.front().size()); }
  const Eigen::VectorXd& operator[](size_t i) const { return candidates_[i]; }
  const std::vector<Eigen::VectorXd>& candidates() const { return candidates_; }
  double radius() const { return radius_; }
  double prediction_bound() const { return prediction_bound_; }

 private:
  CandidateSet(std::vector<Eigen::VectorXd> candidates, double radius,
               double prediction_bound)
      : candidates_(std::move(candidates)),
        radius_(radius),
        prediction_bound_(prediction_bound) {}

  std::vector<Eigen::VectorXd> candidates_;
  double radius_;
  double prediction_bound_;
};

// Regression records: row i of `features` is x_i, `labels(i)` is z_i.
struct LsDataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
};

// sum_i (clamp(w . x_i) - clamp(z_i))^2 with clamp to [-R, R].
double ClampedSquaredLoss(const Eigen::VectorXd& w, const LsDataset& data,
                          double prediction_bound);

// Loss of every candidate, clamped at the set's prediction bound.
Eigen::VectorXd CandidateLosses(const CandidateSet& candidates,
                                const LsDataset& data);

// P(i) proportional to exp(-epsilon L_i / (8 R^2)), evaluated with
// max-shifted exponentials. epsilon = +infinity yields a point mass on the
// lowest-index minimizer.
absl::StatusOr<Eigen::VectorXd> ExponentialMechanismProbabilities(
    const Eigen::VectorXd& losses, double epsilon, double sensitivity_base);

// Samples an index from the distribution above by Gumbel-max over the
// log-weights. InvalidArgument on an empty set, a loss count mismatch,
// non-finite losses, or R <= 0.
absl::StatusOr<size_t> ExponentialMechanismSample(
    const CandidateSet& candidates, const Eigen::VectorXd& losses,
    double epsilon, double sensitivity_base, Rng& rng);

// DP audit: for datasets differing in at most one record, returns the
// largest probability ratio max_w max(P(w|D) / P(w|D'), P(w|D') / P(w|D)),
// computed analytically. The mechanism is epsilon-DP iff this is <= e^eps
// for every adjacent pair. InvalidArgument when the datasets differ in more
// than one record or in size.
absl::StatusOr<double> VerifyExpMechDpRatio(const CandidateSet& candidates,
                                            const LsDataset& dataset,
                                            const LsDataset& adjacent,
                                            double epsilon,
                                            double sensitivity_base);

}  // namespace dppo

#endif  // DPPO_MECHANISMS_EXPONENTIAL_H_
