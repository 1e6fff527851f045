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

#include "dppo/mechanisms/exponential.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {
namespace {

double Clamp(double v, double bound) { return std::clamp(v, -bound, bound); }

absl::Status CheckLosses(const Eigen::VectorXd& losses,
                         double sensitivity_base) {
  if (losses.size() == 0) {
    return absl::InvalidArgumentError("empty candidate set");
  }
  if (!losses.allFinite()) {
    return absl::InvalidArgumentError("candidate losses must be finite");
  }
  if (!(sensitivity_base > 0.0)) {
    return absl::InvalidArgumentError("sensitivity base R must be positive");
  }
  return absl::OkStatus();
}

Eigen::VectorXd LogWeights(const Eigen::VectorXd& losses, double epsilon,
                           double sensitivity_base) {
  const double scale = epsilon / (8.0 * sensitivity_base * sensitivity_base);
  return -scale * losses;
}

// log P(i) for every candidate.
Eigen::VectorXd LogProbabilities(const Eigen::VectorXd& losses, double epsilon,
                                 double sensitivity_base) {
  Eigen::VectorXd log_w = LogWeights(losses, epsilon, sensitivity_base);
  const double top = log_w.maxCoeff();
  const double log_norm = top + std::log((log_w.array() - top).exp().sum());
  return log_w.array() - log_norm;
}

bool RowsEqual(const LsDataset& a, const LsDataset& b, Eigen::Index i) {
  return a.labels(i) == b.labels(i) && a.features.row(i) == b.features.row(i);
}

}  // namespace

absl::StatusOr<CandidateSet> CandidateSet::Create(
    std::vector<Eigen::VectorXd> candidates, double radius,
    double prediction_bound) {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("empty candidate set");
  }
  if (!(radius > 0.0) || !(prediction_bound > 0.0)) {
    return absl::InvalidArgumentError(
        "radius and prediction bound must be positive");
  }
  const Eigen::Index dim = candidates.front().size();
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].size() != dim || dim == 0) {
      return absl::InvalidArgumentError("candidates differ in dimension");
    }
    if (candidates[i].norm() > radius * (1.0 + 1e-12)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "candidate %d has norm %g > radius %g", i, candidates[i].norm(),
          radius));
    }
  }
  std::vector<size_t> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto lex_less = [&](size_t a, size_t b) {
    return std::lexicographical_compare(
        candidates[a].data(), candidates[a].data() + dim,
        candidates[b].data(), candidates[b].data() + dim);
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (size_t i = 1; i < order.size(); ++i) {
    if (candidates[order[i]] == candidates[order[i - 1]]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("duplicate candidates %d and %d", order[i - 1],
                          order[i]));
    }
  }
  return CandidateSet(std::move(candidates), radius, prediction_bound);
}

absl::StatusOr<CandidateSet> CandidateSet::Lattice(int dim, double radius,
                                                   int points_per_axis,
                                                   double prediction_bound,
                                                   size_t max_candidates) {
  if (dim <= 0 || points_per_axis < 1) {
    return absl::InvalidArgumentError(
        "lattice needs positive dimension and resolution");
  }
  const double total = std::pow(static_cast<double>(points_per_axis), dim);
  if (total > static_cast<double>(max_candidates)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "lattice with %d points per axis in dimension %d has %.0f points, "
        "more than the limit %d; use a smaller dimension or the ridge oracle",
        points_per_axis, dim, total, max_candidates));
  }
  std::vector<double> axis(points_per_axis, 0.0);
  if (points_per_axis > 1) {
    for (int i = 0; i < points_per_axis; ++i) {
      axis[i] = -radius + 2.0 * radius * i / (points_per_axis - 1);
    }
  }
  std::vector<Eigen::VectorXd> points;
  std::vector<int> index(dim, 0);
  Eigen::VectorXd w(dim);
  const size_t count = static_cast<size_t>(total);
  for (size_t n = 0; n < count; ++n) {
    for (int k = 0; k < dim; ++k) w(k) = axis[index[k]];
    if (w.norm() <= radius * (1.0 + 1e-12)) points.push_back(w);
    for (int k = dim - 1; k >= 0; --k) {
      if (++index[k] < points_per_axis) break;
      index[k] = 0;
    }
  }
  return Create(std::move(points), radius, prediction_bound);
}

double ClampedSquaredLoss(const Eigen::VectorXd& w, const LsDataset& data,
                          double prediction_bound) {
  const Eigen::VectorXd predictions = data.features * w;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    const double r = Clamp(predictions(i), prediction_bound) -
                     Clamp(data.labels(i), prediction_bound);
    loss += r * r;
  }
  return loss;
}

Eigen::VectorXd CandidateLosses(const CandidateSet& candidates,
                                const LsDataset& data) {
  Eigen::VectorXd losses(static_cast<Eigen::Index>(candidates.size()));
  for (size_t i = 0; i < candidates.size(); ++i) {
    losses(static_cast<Eigen::Index>(i)) = ClampedSquaredLoss(
        candidates[i], data, candidates.prediction_bound());
  }
  return losses;
}

absl::StatusOr<Eigen::VectorXd> ExponentialMechanismProbabilities(
    const Eigen::VectorXd& losses, double epsilon, double sensitivity_base) {
  if (auto s = CheckLosses(losses, sensitivity_base); !s.ok()) return s;
  if (std::isnan(epsilon) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(losses.size());
  if (std::isinf(epsilon)) {
    Eigen::Index best = 0;
    losses.minCoeff(&best);
    p(best) = 1.0;
    return p;
  }
  return LogProbabilities(losses, epsilon, sensitivity_base)
      .array()
      .exp()
      .matrix();
}

absl::StatusOr<size_t> ExponentialMechanismSample(
    const CandidateSet& candidates, const Eigen::VectorXd& losses,
    double epsilon, double sensitivity_base, Rng& rng) {
  if (auto s = CheckLosses(losses, sensitivity_base); !s.ok()) return s;
  if (static_cast<size_t>(losses.size()) != candidates.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d losses for %d candidates", losses.size(),
                        candidates.size()));
  }
  if (std::isnan(epsilon) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (std::isinf(epsilon)) {
    Eigen::Index best = 0;
    losses.minCoeff(&best);
    return static_cast<size_t>(best);
  }
  const Eigen::VectorXd log_w = LogWeights(losses, epsilon, sensitivity_base);
  const double top = log_w.maxCoeff();
  size_t best = 0;
  double best_key = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < log_w.size(); ++i) {
    const double gumbel = -std::log(-std::log(rng.OpenUniform()));
    const double key = (log_w(i) - top) + gumbel;
    if (key > best_key) {
      best_key = key;
      best = static_cast<size_t>(i);
    }
  }
  return best;
}

absl::StatusOr<double> VerifyExpMechDpRatio(const CandidateSet& candidates,
                                            const LsDataset& dataset,
                                            const LsDataset& adjacent,
                                            double epsilon,
                                            double sensitivity_base) {
  if (dataset.labels.size() != adjacent.labels.size() ||
      dataset.features.rows() != adjacent.features.rows() ||
      dataset.features.cols() != adjacent.features.cols()) {
    return absl::InvalidArgumentError("adjacent datasets differ in size");
  }
  int differing = 0;
  for (Eigen::Index i = 0; i < dataset.labels.size(); ++i) {
    if (!RowsEqual(dataset, adjacent, i)) ++differing;
  }
  if (differing > 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "datasets differ in %d records; adjacency allows one", differing));
  }
  if (std::isinf(epsilon)) {
    return absl::InvalidArgumentError(
        "the non-private argmin has no finite probability ratio");
  }
  const Eigen::VectorXd losses = CandidateLosses(candidates, dataset);
  const Eigen::VectorXd adjacent_losses = CandidateLosses(candidates, adjacent);
  if (auto s = CheckLosses(losses, sensitivity_base); !s.ok()) return s;
  const Eigen::VectorXd log_p =
      LogProbabilities(losses, epsilon, sensitivity_base);
  const Eigen::VectorXd log_q =
      LogProbabilities(adjacent_losses, epsilon, sensitivity_base);
  return std::exp((log_p - log_q).cwiseAbs().maxCoeff());
}

}  // namespace dppo
