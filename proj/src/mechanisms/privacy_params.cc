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

#include "dppo/mechanisms/privacy_params.h"

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta) {
  if (std::isnan(epsilon) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", delta));
  }
  return PrivacyParams{epsilon, delta};
}

std::string FormatEpsilon(double epsilon) {
  if (std::isinf(epsilon)) return "inf";
  return absl::StrFormat("%.9g", epsilon);
}

}  // namespace dppo
