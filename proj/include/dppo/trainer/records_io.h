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

#ifndef DPPO_TRAINER_RECORDS_IO_H_
#define DPPO_TRAINER_RECORDS_IO_H_

#include <ostream>
#include <string>
#include <vector>

#include "dppo/mechanisms/privacy_params.h"
#include "dppo/trainer/trainer.h"

namespace dppo {

// Real numbers as written to every output file: 9 significant digits,
// "inf"/"-inf"/"nan" for non-finite values.
std::string FormatReal(double value);

// One line-delimited object with keys iter, J, grad_norm, gap, est_err,
// epsilon, delta in that order. Missing est_err is written as null and an
// infinite epsilon as the string "inf".
std::string FormatRecordLine(const RunRecord& record,
                             const PrivacyParams& privacy);

void WriteRecords(const std::vector<RunRecord>& records,
                  const PrivacyParams& privacy, std::ostream& out);

}  // namespace dppo

#endif  // DPPO_TRAINER_RECORDS_IO_H_
