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

#ifndef DPPO_MECHANISMS_PRIVACY_PARAMS_H_
#define DPPO_MECHANISMS_PRIVACY_PARAMS_H_

#include <cmath>
#include <limits>
#include <string>

#include "absl/status/statusor.h"

namespace dppo {

// (epsilon, delta) budget. epsilon = +infinity denotes the non-private
// variant (no noise, exact argmin). delta = 0 is pure DP, which only the
// exponential mechanism provides.
struct PrivacyParams {
  double epsilon;
  double delta;

  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta);
  static PrivacyParams NonPrivate() {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }

  bool is_private() const { return std::isfinite(epsilon); }

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

// "inf" for the non-private budget, else %.9g.
std::string FormatEpsilon(double epsilon);

}  // namespace dppo

#endif  // DPPO_MECHANISMS_PRIVACY_PARAMS_H_
