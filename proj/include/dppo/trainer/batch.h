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

#ifndef DPPO_TRAINER_BATCH_H_
#define DPPO_TRAINER_BATCH_H_

#include <vector>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"
#include "dppo/mechanisms/budget_ledger.h"
#include "dppo/mechanisms/rng.h"

namespace dppo {

// One user's contribution: x ~ rho, y ~ mu(.|x), y' ~ pi_t(.|x), and the
// advantage estimate r(x, y) - r(x, y').
struct TrajectoryRecord {
  UserId user_id;
  int state;
  int action;
  int compare_action;
  double advantage;
};

struct TrajectoryBatch {
  std::vector<TrajectoryRecord> records;

  size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Sampling policy mu for the first action of each record.
class BasePolicy {
 public:
  enum class Kind { kOnPolicy, kUniform, kFixed };

  static BasePolicy OnPolicy() { return BasePolicy(Kind::kOnPolicy, {}); }
  static BasePolicy Uniform() { return BasePolicy(Kind::kUniform, {}); }
  // Rows must be probability vectors (within 1e-9).
  static absl::StatusOr<BasePolicy> Fixed(PolicyTable table);

  Kind kind() const { return kind_; }
  const PolicyTable& table() const { return table_; }

  // Shape check against an instance.
  absl::Status Validate(int num_states, int num_actions) const;
  // mu_t as a table, given the current policy pi_t.
  PolicyTable Resolve(const Policy& current) const;

 private:
  BasePolicy(Kind kind, PolicyTable table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  PolicyTable table_;
};

// Hands out fresh user identifiers, one per sampled record.
class UserPool {
 public:
  UserId Draw() { return next_++; }
  UserId next() const { return next_; }

 private:
  UserId next_ = 0;
};

// Draws m fresh records and registers their users with the ledger.
// InvalidArgument for m < 1; the ledger's error on a repeated user.
absl::StatusOr<TrajectoryBatch> SampleBatch(const ContextualBandit& bandit,
                                            const Policy& current,
                                            const BasePolicy& base,
                                            long long batch_size, Rng& rng,
                                            BudgetLedger& ledger,
                                            UserPool& users);

}  // namespace dppo

#endif  // DPPO_TRAINER_BATCH_H_
