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

#include "dppo/core/policy.h"

#include <cmath>
#include <stdexcept>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

std::string_view PolicyFamilyName(PolicyFamily family) {
  switch (family) {
    case PolicyFamily::kTabularSoftmax:
      return "tabular";
    case PolicyFamily::kLogLinear:
      return "loglinear";
  }
  return "unknown";
}

FeatureMap FeatureMap::OneHot(int num_states, int num_actions) {
  return FeatureMap(PolicyFamily::kTabularSoftmax, num_states, num_actions,
                    num_states * num_actions, {}, 1.0);
}

absl::StatusOr<FeatureMap> FeatureMap::Dense(int num_states, int num_actions,
                                             int dim,
                                             std::vector<double> values,
                                             double bound) {
  if (num_states <= 0 || num_actions <= 0 || dim <= 0) {
    return absl::InvalidArgumentError(
        "feature map dimensions must be positive");
  }
  const size_t expected = static_cast<size_t>(num_states) * num_actions * dim;
  if (values.size() != expected) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected %d feature values (d * |X| * |Y|), got %d",
                        expected, values.size()));
  }
  double max_norm = 0.0;
  for (size_t start = 0; start < expected; start += dim) {
    double sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double v = values[start + k];
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("feature values must be finite");
      }
      sq += v * v;
    }
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  if (bound <= 0.0) {
    bound = max_norm;
  } else if (max_norm > bound * (1.0 + 1e-12)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "feature norm %g exceeds the declared bound %g", max_norm, bound));
  }
  if (bound <= 0.0) {
    return absl::InvalidArgumentError("all features are zero");
  }
  return FeatureMap(PolicyFamily::kLogLinear, num_states, num_actions, dim,
                    std::move(values), bound);
}

void FeatureMap::CheckIndex(int state, int action) const {
  if (state < 0 || state >= num_states_ || action < 0 ||
      action >= num_actions_) {
    throw std::out_of_range(absl::StrFormat(
        "(state, action) = (%d, %d) out of range", state, action));
  }
}

Eigen::VectorXd FeatureMap::Feature(int state, int action) const {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dim_);
  AddScaled(state, action, 1.0, phi);
  return phi;
}

Eigen::VectorXd FeatureMap::Logits(const Eigen::VectorXd& theta,
                                   int state) const {
  CheckIndex(state, 0);
  Eigen::VectorXd logits(num_actions_);
  if (family_ == PolicyFamily::kTabularSoftmax) {
    logits = theta.segment(static_cast<Eigen::Index>(state) * num_actions_,
                           num_actions_);
    return logits;
  }
  for (int y = 0; y < num_actions_; ++y) {
    const double* phi =
        values_.data() + (static_cast<size_t>(state) * num_actions_ + y) * dim_;
    logits(y) = Eigen::Map<const Eigen::VectorXd>(phi, dim_).dot(theta);
  }
  return logits;
}

void FeatureMap::AddScaled(int state, int action, double scale,
                           Eigen::VectorXd& out) const {
  CheckIndex(state, action);
  if (family_ == PolicyFamily::kTabularSoftmax) {
    out(static_cast<Eigen::Index>(state) * num_actions_ + action) += scale;
    return;
  }
  const double* phi =
      values_.data() + (static_cast<size_t>(state) * num_actions_ + action) *
                           dim_;
  out += scale * Eigen::Map<const Eigen::VectorXd>(phi, dim_);
}

Policy Policy::TabularSoftmax(int num_states, int num_actions) {
  auto features = std::make_shared<const FeatureMap>(
      FeatureMap::OneHot(num_states, num_actions));
  const int dim = features->dim();
  return Policy(std::move(features), Eigen::VectorXd::Zero(dim));
}

Policy Policy::LogLinear(std::shared_ptr<const FeatureMap> features) {
  const int dim = features->dim();
  return Policy(std::move(features), Eigen::VectorXd::Zero(dim));
}

absl::StatusOr<Policy> Policy::WithTheta(Eigen::VectorXd theta) const {
  if (theta.size() != dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "theta has %d entries, policy dimension is %d", theta.size(), dim()));
  }
  if (!theta.allFinite()) {
    return absl::InvalidArgumentError("theta must be finite");
  }
  return Policy(features_, std::move(theta));
}

Policy Policy::Shifted(const Eigen::VectorXd& delta) const {
  if (delta.size() != dim()) {
    throw std::invalid_argument(absl::StrFormat(
        "step has %d entries, policy dimension is %d", delta.size(), dim()));
  }
  return Policy(features_, theta_ + delta);
}

void Policy::CheckState(int state) const {
  if (state < 0 || state >= num_states()) {
    throw std::out_of_range(absl::StrFormat("state %d out of range", state));
  }
}

Eigen::VectorXd Policy::ActionProbabilities(int state) const {
  CheckState(state);
  const Eigen::VectorXd logits = features_->Logits(theta_, state);
  Eigen::VectorXd p = (logits.array() - logits.maxCoeff()).exp();
  p /= p.sum();
  return p;
}

double Policy::LogProbability(int state, int action) const {
  CheckState(state);
  if (action < 0 || action >= num_actions()) {
    throw std::out_of_range(absl::StrFormat("action %d out of range", action));
  }
  const Eigen::VectorXd logits = features_->Logits(theta_, state);
  const double top = logits.maxCoeff();
  const double log_norm = top + std::log((logits.array() - top).exp().sum());
  return logits(action) - log_norm;
}

Eigen::VectorXd Policy::Score(int state, int action) const {
  const Eigen::VectorXd p = ActionProbabilities(state);
  Eigen::VectorXd score = features_->Feature(state, action);
  for (int y = 0; y < num_actions(); ++y) {
    features_->AddScaled(state, y, -p(y), score);
  }
  return score;
}

Eigen::VectorXd Policy::FeatureDifference(int state, int a, int b) const {
  Eigen::VectorXd diff = features_->Feature(state, a);
  features_->AddScaled(state, b, -1.0, diff);
  return diff;
}

PolicyTable Policy::Table() const {
  PolicyTable table(num_states(), num_actions());
  for (int x = 0; x < num_states(); ++x) {
    table.row(x) = ActionProbabilities(x).transpose();
  }
  return table;
}

PolicyConstants Policy::Constants(double r_max) const {
  PolicyConstants c{};
  if (family() == PolicyFamily::kTabularSoftmax) {
    c.g_bound = std::sqrt(1.0 - 1.0 / num_actions());
    c.f_bound = 1.0;
    c.beta = 1.0;
  } else {
    const double b = features_->bound();
    c.g_bound = 2.0 * b;
    c.f_bound = b * b;
    c.beta = b * b;
  }
  c.smoothness = 2.0 * r_max * (c.g_bound * c.g_bound + c.f_bound);
  return c;
}

}  // namespace dppo
