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

#include "dppo/trainer/records_io.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dppo {
namespace {

// JSON has no infinity literal, so non-finite values become strings.
std::string JsonReal(double value) {
  if (std::isfinite(value)) return FormatReal(value);
  return absl::StrCat("\"", FormatReal(value), "\"");
}

}  // namespace

std::string FormatReal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.9g", value);
}

std::string FormatRecordLine(const RunRecord& record,
                             const PrivacyParams& privacy) {
  return absl::StrFormat(
      "{\"iter\":%d,\"J\":%s,\"grad_norm\":%s,\"gap\":%s,\"est_err\":%s,"
      "\"epsilon\":%s,\"delta\":%s}",
      record.iteration, JsonReal(record.value), JsonReal(record.grad_norm),
      JsonReal(record.gap),
      record.est_err ? JsonReal(*record.est_err) : std::string("null"),
      JsonReal(privacy.epsilon), JsonReal(privacy.delta));
}

void WriteRecords(const std::vector<RunRecord>& records,
                  const PrivacyParams& privacy, std::ostream& out) {
  for (const RunRecord& record : records) {
    out << FormatRecordLine(record, privacy) << '\n';
  }
}

}  // namespace dppo
