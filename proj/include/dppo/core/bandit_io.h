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

#ifndef DPPO_CORE_BANDIT_IO_H_
#define DPPO_CORE_BANDIT_IO_H_

#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "dppo/core/bandit.h"
#include "dppo/core/policy.h"

namespace dppo {

// A bandit instance plus optional log-linear features.
//
// File format (JSON):
//   {
//     "num_states": 5, "num_actions": 4,
//     "rho": [...],                      // |X| entries
//     "rewards": [...],                  // |X| * |Y| entries, row-major
//     "r_max": 1.0,
//     "features": {                      // optional
//       "dim": 3,
//       "values": [...],                 // d * |X| * |Y| entries
//       "bound": 1.0                     // optional, B
//     }
//   }
struct BanditInstance {
  ContextualBandit bandit;
  std::shared_ptr<const FeatureMap> features;  // null when absent
};

absl::StatusOr<BanditInstance> ParseBanditInstance(const std::string& text);
absl::StatusOr<BanditInstance> LoadBanditInstance(const std::string& path);

}  // namespace dppo

#endif  // DPPO_CORE_BANDIT_IO_H_
