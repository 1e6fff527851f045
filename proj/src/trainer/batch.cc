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

#include "dppo/trainer/batch.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

absl::StatusOr<BasePolicy> BasePolicy::Fixed(PolicyTable table) {
  if (table.size() == 0) {
    return absl::InvalidArgumentError("fixed base policy table is empty");
  }
  for (Eigen::Index x = 0; x < table.rows(); ++x) {
    if (!table.row(x).allFinite() || table.row(x).minCoeff() < 0.0 ||
        std::abs(table.row(x).sum() - 1.0) > 1e-9) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d of the fixed base policy is not a distribution", x));
    }
  }
  return BasePolicy(Kind::kFixed, std::move(table));
}

absl::Status BasePolicy::Validate(int num_states, int num_actions) const {
  if (kind_ == Kind::kFixed &&
      (table_.rows() != num_states || table_.cols() != num_actions)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "fixed base policy is %dx%d, instance is %dx%d", table_.rows(),
        table_.cols(), num_states, num_actions));
  }
  return absl::OkStatus();
}

PolicyTable BasePolicy::Resolve(const Policy& current) const {
  switch (kind_) {
    case Kind::kOnPolicy:
      return current.Table();
    case Kind::kUniform:
      return UniformTable(current.num_states(), current.num_actions());
    case Kind::kFixed:
      return table_;
  }
  return current.Table();
}

absl::StatusOr<TrajectoryBatch> SampleBatch(const ContextualBandit& bandit,
                                            const Policy& current,
                                            const BasePolicy& base,
                                            long long batch_size, Rng& rng,
                                            BudgetLedger& ledger,
                                            UserPool& users) {
  if (batch_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batch size must be >= 1, got %d", batch_size));
  }
  if (auto s = base.Validate(bandit.num_states(), bandit.num_actions());
      !s.ok()) {
    return s;
  }
  const PolicyTable pi = current.Table();
  const PolicyTable mu = base.Resolve(current);

  TrajectoryBatch batch;
  batch.records.reserve(static_cast<size_t>(batch_size));
  std::vector<UserId> ids;
  ids.reserve(static_cast<size_t>(batch_size));
  for (long long i = 0; i < batch_size; ++i) {
    TrajectoryRecord record{};
    record.user_id = users.Draw();
    record.state = rng.Categorical(bandit.rho());
    record.action = rng.Categorical(mu.row(record.state).transpose());
    record.compare_action = rng.Categorical(pi.row(record.state).transpose());
    record.advantage = bandit.rewards()(record.state, record.action) -
                       bandit.rewards()(record.state, record.compare_action);
    ids.push_back(record.user_id);
    batch.records.push_back(record);
  }
  if (auto s = ledger.RecordBatch(ids); !s.ok()) return s;
  return batch;
}

}  // namespace dppo
