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

#ifndef DPPO_CORE_POLICY_H_
#define DPPO_CORE_POLICY_H_

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"

namespace dppo {

enum class PolicyFamily { kTabularSoftmax, kLogLinear };

std::string_view PolicyFamilyName(PolicyFamily family);

// Feature map phi: (state, action) -> R^d. The tabular family is the one-hot
// map with d = |X| * |Y|, stored implicitly.
class FeatureMap {
 public:
  static FeatureMap OneHot(int num_states, int num_actions);

  // `values` holds d * |X| * |Y| reals, feature (x, y) occupying the slice
  // starting at (x * |Y| + y) * d. A nonpositive `bound` means "use the
  // largest feature norm"; otherwise every feature must satisfy
  // ||phi_{x,y}|| <= bound.
  static absl::StatusOr<FeatureMap> Dense(int num_states, int num_actions,
                                          int dim, std::vector<double> values,
                                          double bound = 0.0);

  PolicyFamily family() const { return family_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int dim() const { return dim_; }
  // B with ||phi_{x,y}|| <= B; 1 for one-hot features.
  double bound() const { return bound_; }

  Eigen::VectorXd Feature(int state, int action) const;
  // theta . phi_{state, y} for every action y.
  Eigen::VectorXd Logits(const Eigen::VectorXd& theta, int state) const;
  // out += scale * phi_{state, action}
  void AddScaled(int state, int action, double scale,
                 Eigen::VectorXd& out) const;

 private:
  FeatureMap(PolicyFamily family, int num_states, int num_actions, int dim,
             std::vector<double> values, double bound)
      : family_(family),
        num_states_(num_states),
        num_actions_(num_actions),
        dim_(dim),
        values_(std::move(values)),
        bound_(bound) {}

  void CheckIndex(int state, int action) const;

  PolicyFamily family_;
  int num_states_;
  int num_actions_;
  int dim_;
  std::vector<double> values_;
  double bound_;
};

// Analytic constants of a policy class: ||score|| <= G, ||Hessian of
// log pi|| <= F, smoothness L = 2 R_max (G^2 + F) of J, and the smoothness
// beta of log pi used by the mirror-descent analysis.
struct PolicyConstants {
  double g_bound;
  double f_bound;
  double smoothness;
  double beta;
};

// Softmax policy pi_theta(y|x) proportional to exp(theta . phi_{x,y}).
// Immutable value type; the feature map is shared between copies.
//
// Index arguments are checked and throw std::out_of_range when invalid.
class Policy {
 public:
  // Tabular softmax at theta = 0.
  static Policy TabularSoftmax(int num_states, int num_actions);
  // Log-linear policy at theta = 0.
  static Policy LogLinear(std::shared_ptr<const FeatureMap> features);

  // Same family and features with a new parameter vector.
  absl::StatusOr<Policy> WithTheta(Eigen::VectorXd theta) const;
  // theta + delta. Throws std::invalid_argument on a size mismatch.
  Policy Shifted(const Eigen::VectorXd& delta) const;

  PolicyFamily family() const { return features_->family(); }
  int num_states() const { return features_->num_states(); }
  int num_actions() const { return features_->num_actions(); }
  int dim() const { return features_->dim(); }
  const Eigen::VectorXd& theta() const { return theta_; }
  const FeatureMap& features() const { return *features_; }
  const std::shared_ptr<const FeatureMap>& shared_features() const {
    return features_;
  }

  // pi_theta(. | state), computed with max-subtraction.
  Eigen::VectorXd ActionProbabilities(int state) const;
  double LogProbability(int state, int action) const;
  // grad_theta log pi_theta(action | state)
  //   = phi_{state, action} - E_{y ~ pi(.|state)} phi_{state, y}.
  Eigen::VectorXd Score(int state, int action) const;
  // phi_{state, a} - phi_{state, b}
  Eigen::VectorXd FeatureDifference(int state, int a, int b) const;
  // Per-state action probabilities for every state.
  PolicyTable Table() const;

  PolicyConstants Constants(double r_max) const;

 private:
  Policy(std::shared_ptr<const FeatureMap> features, Eigen::VectorXd theta)
      : features_(std::move(features)), theta_(std::move(theta)) {}

  void CheckState(int state) const;

  std::shared_ptr<const FeatureMap> features_;
  Eigen::VectorXd theta_;
};

}  // namespace dppo

#endif  // DPPO_CORE_POLICY_H_
