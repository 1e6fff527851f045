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

#include "dppo/mechanisms/budget_ledger.h"

#include "absl/strings/str_format.h"

namespace dppo {

absl::Status BudgetLedger::RecordBatch(std::span<const UserId> user_ids) {
  std::unordered_set<UserId> fresh;
  fresh.reserve(user_ids.size());
  for (UserId id : user_ids) {
    if (user_ids_.contains(id) || !fresh.insert(id).second) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "user %d already contributed to a batch; one-pass sampling "
          "requires disjoint batches",
          id));
    }
  }
  user_ids_.merge(fresh);
  ++batches_seen_;
  return absl::OkStatus();
}

}  // namespace dppo
