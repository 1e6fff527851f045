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

#ifndef DPPO_MECHANISMS_BUDGET_LEDGER_H_
#define DPPO_MECHANISMS_BUDGET_LEDGER_H_

#include <cstdint>
#include <span>
#include <unordered_set>

#include "absl/status/status.h"
#include "dppo/mechanisms/privacy_params.h"

namespace dppo {

using UserId = std::uint64_t;

// Privacy accounting for one-pass training. Every batch is processed by an
// (epsilon, delta)-DP update, and every user contributes to exactly one
// batch, so by parallel composition the whole run is (epsilon, delta)-DP:
// the reported total is the per-batch budget, never T times it. Recording a
// user twice is rejected. Single writer.
class BudgetLedger {
 public:
  explicit BudgetLedger(PrivacyParams per_batch) : per_batch_(per_batch) {}

  // Registers one batch atomically: on a duplicate (within the batch or
  // against any earlier batch) nothing is recorded and FailedPrecondition is
  // returned. An empty batch still counts as a batch.
  absl::Status RecordBatch(std::span<const UserId> user_ids);

  const PrivacyParams& per_batch() const { return per_batch_; }
  PrivacyParams Total() const { return per_batch_; }
  long long batches_seen() const { return batches_seen_; }
  size_t users_seen() const { return user_ids_.size(); }
  bool Contains(UserId id) const { return user_ids_.contains(id); }

 private:
  PrivacyParams per_batch_;
  long long batches_seen_ = 0;
  std::unordered_set<UserId> user_ids_;
};

}  // namespace dppo

#endif  // DPPO_MECHANISMS_BUDGET_LEDGER_H_
