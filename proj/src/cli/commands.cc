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

#include "dppo/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dppo/cli/config_io.h"
#include "dppo/cli/experiment.h"
#include "dppo/core/bandit_io.h"
#include "dppo/trainer/records_io.h"

namespace dppo {
namespace {

absl::Status EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrFormat(
        "cannot create output directory '%s': %s", dir, ec.message()));
  }
  return absl::OkStatus();
}

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path.string(), "'"));
  }
  return absl::OkStatus();
}

int Fail(std::ostream& err, int code, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return code;
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

// Sample standard deviation (n - 1); 0 for a single value.
Stats MeanStd(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

int CmdRun(const RunArgs& args, std::ostream& err) {
  auto config = LoadExperimentConfig(args.config_path);
  if (!config.ok()) return Fail(err, kExitValidation, config.status());
  if (args.seed) config->run.seed = *args.seed;
  auto instance = LoadBanditInstance(args.instance_path);
  if (!instance.ok()) return Fail(err, kExitValidation, instance.status());
  auto experiment = PrepareExperiment(*config, *instance);
  if (!experiment.ok()) return Fail(err, kExitValidation, experiment.status());
  if (absl::Status s = EnsureDirectory(args.out_dir); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }

  auto result = Run(config->run, experiment->schedule, instance->bandit,
                    experiment->prototype, *experiment->update);
  if (!result.ok()) return Fail(err, kExitRuntime, result.status());

  std::ostringstream records;
  WriteRecords(result->records, config->run.privacy, records);
  const std::filesystem::path out(args.out_dir);
  if (absl::Status s = WriteFile(out / "records.jsonl", records.str());
      !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  const std::string summary =
      absl::StrCat(SummaryHeader(), "\n",
                   FormatSummaryRow(Summarize(*config, *result)), "\n");
  if (absl::Status s = WriteFile(out / "summary.csv", summary); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  return kExitOk;
}

int CmdSweep(const SweepArgs& args, std::ostream& err) {
  auto spec = LoadSweepSpec(args.spec_path);
  if (!spec.ok()) return Fail(err, kExitValidation, spec.status());
  auto instance = LoadBanditInstance(spec->instance_path);
  if (!instance.ok()) return Fail(err, kExitValidation, instance.status());
  if (args.workers < 1) {
    return Fail(err, kExitValidation,
                absl::InvalidArgumentError("--workers must be at least 1"));
  }
  if (absl::Status s = EnsureDirectory(args.out_dir); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }

  struct Job {
    size_t value_index;
    std::uint64_t seed;
  };
  struct Outcome {
    std::optional<SummaryRow> row;
    std::string error;
  };
  std::vector<Job> jobs;
  for (size_t v = 0; v < spec->values.size(); ++v) {
    for (std::uint64_t seed : spec->seeds) jobs.push_back({v, seed});
  }
  std::vector<Outcome> outcomes(jobs.size());

  // Every job owns its config, rng and ledger; results land in their own
  // slot, so only the job counter is shared.
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      auto config = SweepPoint(*spec, spec->values[job.value_index], job.seed);
      if (!config.ok()) {
        outcomes[i].error = std::string(config.status().message());
        continue;
      }
      auto result = RunExperiment(*config, *instance);
      if (!result.ok()) {
        outcomes[i].error = std::string(result.status().message());
        continue;
      }
      outcomes[i].row = Summarize(*config, *result);
    }
  };
  const int threads = std::min<int>(args.workers, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::string rows = absl::StrCat(SummaryHeader(), ",status\n");
  std::string aggregate = absl::StrCat(
      SweepAxisName(spec->axis),
      ",runs,mean_final_J,std_final_J,best_epoch_mean_J,mean_final_gap,"
      "std_final_gap\n");
  int failures = 0;
  for (size_t v = 0; v < spec->values.size(); ++v) {
    std::vector<double> finals;
    std::vector<double> bests;
    std::vector<double> gaps;
    for (size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].value_index != v) continue;
      const Outcome& o = outcomes[i];
      if (o.row) {
        absl::StrAppend(&rows, FormatSummaryRow(*o.row), ",ok\n");
        finals.push_back(o.row->final_value);
        bests.push_back(o.row->best_value);
        gaps.push_back(o.row->final_gap);
      } else {
        ++failures;
        std::string message = o.error;
        std::replace(message.begin(), message.end(), ',', ';');
        std::replace(message.begin(), message.end(), '\n', ' ');
        absl::StrAppend(&rows, std::string(AlgorithmName(spec->base.run.algorithm)),
                        ",,,,,,", jobs[i].seed, ",,,,error: ", message, "\n");
      }
    }
    const Stats final_stats = MeanStd(finals);
    const Stats best_stats = MeanStd(bests);
    const Stats gap_stats = MeanStd(gaps);
    absl::StrAppend(
        &aggregate, FormatReal(spec->values[v]), ",", finals.size(), ",",
        FormatReal(final_stats.mean), ",", FormatReal(final_stats.std), ",",
        FormatReal(best_stats.mean), ",", FormatReal(gap_stats.mean), ",",
        FormatReal(gap_stats.std), "\n");
  }
  const std::filesystem::path out(args.out_dir);
  if (absl::Status s = WriteFile(out / "sweep.csv", rows); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  if (absl::Status s = WriteFile(out / "aggregate.csv", aggregate); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  if (failures > 0) {
    err << "error: " << failures << " of " << jobs.size()
        << " sweep rows failed; see sweep.csv\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int CmdVerify(const VerifyArgs& args, std::ostream& err) {
  if (absl::Status s = EnsureDirectory(args.out_dir); !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  const std::vector<CheckResult> results = RunVerifySuite(args.options);
  const std::string report = FormatVerifyReport(results);
  if (absl::Status s = WriteFile(
          std::filesystem::path(args.out_dir) / "verify_report.txt", report);
      !s.ok()) {
    return Fail(err, kExitRuntime, s);
  }
  const bool all_passed = std::all_of(
      results.begin(), results.end(),
      [](const CheckResult& r) { return r.passed; });
  if (!all_passed) {
    err << report;
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace dppo
