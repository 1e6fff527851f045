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

#include "dppo/cli/config_io.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dppo {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckKeys(const json& object, const std::set<std::string>& known,
                       const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown key '%s' in %s", key, where));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ReadReal(const json& value, const std::string& key,
                                bool allow_inf) {
  if (value.is_number()) return value.get<double>();
  if (allow_inf && value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "'%s' must be a number%s", key, allow_inf ? " or \"inf\"" : ""));
}

// Integer or "auto"; "auto" and absence both yield nullopt.
absl::StatusOr<std::optional<long long>> ReadAutoInt(const json& object,
                                                     const std::string& key) {
  if (!object.contains(key)) return std::nullopt;
  const json& v = object.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) {
      return static_cast<long long>(d);
    }
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("'%s' must be an integer or \"auto\"", key));
}

absl::StatusOr<BasePolicy> ReadBasePolicy(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "on-policy") return BasePolicy::OnPolicy();
    if (s == "uniform") return BasePolicy::Uniform();
    return absl::InvalidArgumentError(absl::StrFormat(
        "base_policy '%s' (expected on-policy, uniform or {\"table\": ...})",
        s));
  }
  if (!v.is_object() || !v.contains("table") || !v.at("table").is_array() ||
      v.at("table").empty()) {
    return absl::InvalidArgumentError(
        "base_policy table must be a nonempty list of rows");
  }
  const json& rows = v.at("table");
  const size_t cols = rows.at(0).is_array() ? rows.at(0).size() : 0;
  if (cols == 0) {
    return absl::InvalidArgumentError("base_policy rows must be nonempty lists");
  }
  PolicyTable table(rows.size(), cols);
  for (size_t x = 0; x < rows.size(); ++x) {
    if (!rows[x].is_array() || rows[x].size() != cols) {
      return absl::InvalidArgumentError("base_policy rows differ in length");
    }
    for (size_t y = 0; y < cols; ++y) {
      if (!rows[x][y].is_number()) {
        return absl::InvalidArgumentError("base_policy entries must be numbers");
      }
      table(x, y) = rows[x][y].get<double>();
    }
  }
  return BasePolicy::Fixed(std::move(table));
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(const json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  if (absl::Status s = CheckKeys(
          j,
          {"algorithm", "policy", "total_samples", "batch_size", "iterations",
           "learning_rate", "epsilon", "delta", "base_policy",
           "regularization", "seed", "oracle", "oracle_options",
           "advantage_bound", "stop_at_certificate", "failure_probability"},
          "config");
      !s.ok()) {
    return s;
  }
  ExperimentConfig config;
  RunConfig& run = config.run;

  if (!j.contains("algorithm") || !j.at("algorithm").is_string()) {
    return absl::InvalidArgumentError("config needs a string 'algorithm'");
  }
  auto algorithm = ParseAlgorithm(j.at("algorithm").get<std::string>());
  if (!algorithm.ok()) return algorithm.status();
  run.algorithm = *algorithm;

  if (j.contains("policy")) {
    const json& p = j.at("policy");
    if (p == "tabular") {
      config.policy = PolicyFamily::kTabularSoftmax;
    } else if (p == "loglinear") {
      config.policy = PolicyFamily::kLogLinear;
    } else {
      return absl::InvalidArgumentError(
          "'policy' must be \"tabular\" or \"loglinear\"");
    }
  }

  auto n = ReadAutoInt(j, "total_samples");
  if (!n.ok()) return n.status();
  run.total_samples = *n;
  auto m = ReadAutoInt(j, "batch_size");
  if (!m.ok()) return m.status();
  run.batch_size = *m;
  auto t = ReadAutoInt(j, "iterations");
  if (!t.ok()) return t.status();
  run.iterations = *t;

  if (j.contains("learning_rate") && j.at("learning_rate") != "auto") {
    auto eta = ReadReal(j.at("learning_rate"), "learning_rate", false);
    if (!eta.ok()) return eta.status();
    if (!(*eta >= 0.0)) {
      return absl::InvalidArgumentError("learning_rate must be nonnegative");
    }
    run.learning_rate = *eta;
  }

  double epsilon = kInf;
  double delta = 0.0;
  if (j.contains("epsilon")) {
    auto e = ReadReal(j.at("epsilon"), "epsilon", true);
    if (!e.ok()) return e.status();
    epsilon = *e;
  }
  if (j.contains("delta")) {
    auto d = ReadReal(j.at("delta"), "delta", false);
    if (!d.ok()) return d.status();
    delta = *d;
  }
  auto privacy = PrivacyParams::Create(epsilon, delta);
  if (!privacy.ok()) return privacy.status();
  run.privacy = *privacy;

  if (j.contains("base_policy")) {
    auto base = ReadBasePolicy(j.at("base_policy"));
    if (!base.ok()) return base.status();
    run.base_policy = *std::move(base);
  }
  if (j.contains("regularization")) {
    auto lambda = ReadReal(j.at("regularization"), "regularization", false);
    if (!lambda.ok()) return lambda.status();
    if (!(*lambda >= 0.0)) {
      return absl::InvalidArgumentError("regularization must be nonnegative");
    }
    run.regularization = *lambda;
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      return absl::InvalidArgumentError("'seed' must be an unsigned integer");
    }
    run.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("oracle")) {
    if (!j.at("oracle").is_string()) {
      return absl::InvalidArgumentError("'oracle' must be a string");
    }
    auto kind = ParseOracle(j.at("oracle").get<std::string>());
    if (!kind.ok()) return kind.status();
    run.oracle.kind = *kind;
  }
  if (j.contains("oracle_options")) {
    const json& o = j.at("oracle_options");
    if (!o.is_object()) {
      return absl::InvalidArgumentError("'oracle_options' must be an object");
    }
    if (absl::Status s = CheckKeys(
            o, {"radius", "grid_points", "ridge", "sensitivity_base"},
            "oracle_options");
        !s.ok()) {
      return s;
    }
    if (o.contains("radius")) {
      auto r = ReadReal(o.at("radius"), "radius", false);
      if (!r.ok()) return r.status();
      run.oracle.radius = *r;
    }
    if (o.contains("grid_points")) {
      if (!o.at("grid_points").is_number_integer()) {
        return absl::InvalidArgumentError("'grid_points' must be an integer");
      }
      run.oracle.grid_points = o.at("grid_points").get<int>();
    }
    if (o.contains("ridge")) {
      auto r = ReadReal(o.at("ridge"), "ridge", false);
      if (!r.ok()) return r.status();
      run.oracle.ridge = *r;
    }
    if (o.contains("sensitivity_base")) {
      auto r = ReadReal(o.at("sensitivity_base"), "sensitivity_base", false);
      if (!r.ok()) return r.status();
      run.oracle.sensitivity_base = *r;
    }
  }
  if (j.contains("advantage_bound")) {
    auto a = ReadReal(j.at("advantage_bound"), "advantage_bound", false);
    if (!a.ok()) return a.status();
    run.advantage_bound = *a;
  }
  if (j.contains("stop_at_certificate")) {
    if (!j.at("stop_at_certificate").is_boolean()) {
      return absl::InvalidArgumentError("'stop_at_certificate' must be a bool");
    }
    run.stop_at_certificate = j.at("stop_at_certificate").get<bool>();
  }
  if (j.contains("failure_probability")) {
    auto z = ReadReal(j.at("failure_probability"), "failure_probability",
                      false);
    if (!z.ok()) return z.status();
    run.failure_probability = *z;
  }

  // Checks that do not depend on the instance.
  const bool gradient_based = run.algorithm == Algorithm::kPg ||
                              run.algorithm == Algorithm::kPgLogBarrier;
  if (run.privacy.is_private() && run.privacy.delta == 0.0) {
    if (gradient_based) {
      return absl::InvalidArgumentError(
          "the Gaussian mechanism of DP-PG needs delta > 0");
    }
    if (run.oracle.kind == OracleKind::kRidge) {
      return absl::InvalidArgumentError("the ridge oracle needs delta > 0");
    }
  }
  if (!gradient_based && run.privacy.is_private() &&
      run.oracle.kind == OracleKind::kExact) {
    return absl::InvalidArgumentError(
        "the exact oracle is not private; use expmech or ridge, or epsilon "
        "\"inf\"");
  }
  if (run.algorithm == Algorithm::kPgLogBarrier &&
      !(run.regularization > 0.0)) {
    return absl::InvalidArgumentError(
        "pg-logbarrier needs regularization > 0");
  }
  if (run.algorithm == Algorithm::kPg && run.regularization != 0.0) {
    return absl::InvalidArgumentError(
        "regularization applies to pg-logbarrier only");
  }
  if (!(run.oracle.radius > 0.0) || run.oracle.grid_points < 2 ||
      !(run.oracle.ridge >= 0.0) ||
      (run.oracle.sensitivity_base && !(*run.oracle.sensitivity_base > 0.0))) {
    return absl::InvalidArgumentError(
        "oracle options need radius > 0, grid_points >= 2, ridge >= 0 and "
        "sensitivity_base > 0");
  }
  if (run.advantage_bound && !(*run.advantage_bound > 0.0)) {
    return absl::InvalidArgumentError("advantage_bound must be positive");
  }
  if (!(run.failure_probability > 0.0 && run.failure_probability < 1.0)) {
    return absl::InvalidArgumentError("failure_probability must lie in (0, 1)");
  }
  return config;
}

absl::StatusOr<json> ParseJson(const std::string& text,
                               const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(what, " is not valid JSON"));
  }
  return j;
}

}  // namespace

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const std::string& text) {
  auto j = ParseJson(text, "config");
  if (!j.ok()) return j.status();
  return ConfigFromJson(*j);
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseExperimentConfig(*text);
}

std::string SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kEpsilon:
      return "epsilon";
    case SweepAxis::kTotalSamples:
      return "total_samples";
    case SweepAxis::kBatchSize:
      return "batch_size";
  }
  return "unknown";
}

absl::StatusOr<SweepSpec> ParseSweepSpec(const std::string& text,
                                         const std::string& base_dir) {
  auto parsed = ParseJson(text, "sweep spec");
  if (!parsed.ok()) return parsed.status();
  const json& j = *parsed;
  if (!j.is_object()) {
    return absl::InvalidArgumentError("sweep spec must be a JSON object");
  }
  if (absl::Status s = CheckKeys(
          j, {"axis", "values", "seeds", "config", "instance"}, "sweep spec");
      !s.ok()) {
    return s;
  }
  for (const char* key : {"axis", "values", "seeds", "config", "instance"}) {
    if (!j.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sweep spec needs '%s'", key));
    }
  }
  SweepSpec spec;
  const json& axis = j.at("axis");
  if (axis == "epsilon") {
    spec.axis = SweepAxis::kEpsilon;
  } else if (axis == "total_samples") {
    spec.axis = SweepAxis::kTotalSamples;
  } else if (axis == "batch_size") {
    spec.axis = SweepAxis::kBatchSize;
  } else {
    return absl::InvalidArgumentError(
        "'axis' must be epsilon, total_samples or batch_size");
  }
  if (!j.at("values").is_array() || j.at("values").empty()) {
    return absl::InvalidArgumentError("'values' must be a nonempty list");
  }
  for (const json& v : j.at("values")) {
    auto value = ReadReal(v, "values", spec.axis == SweepAxis::kEpsilon);
    if (!value.ok()) return value.status();
    spec.values.push_back(*value);
  }
  if (!j.at("seeds").is_array() || j.at("seeds").empty()) {
    return absl::InvalidArgumentError("'seeds' must be a nonempty list");
  }
  for (const json& s : j.at("seeds")) {
    if (!s.is_number_unsigned()) {
      return absl::InvalidArgumentError("seeds must be unsigned integers");
    }
    spec.seeds.push_back(s.get<std::uint64_t>());
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).string();
  };
  const json& config = j.at("config");
  if (config.is_string()) {
    auto loaded = LoadExperimentConfig(resolve(config.get<std::string>()));
    if (!loaded.ok()) return loaded.status();
    spec.base = *std::move(loaded);
  } else {
    auto inline_config = ConfigFromJson(config);
    if (!inline_config.ok()) return inline_config.status();
    spec.base = *std::move(inline_config);
  }
  if (!j.at("instance").is_string()) {
    return absl::InvalidArgumentError("'instance' must be a path");
  }
  spec.instance_path = resolve(j.at("instance").get<std::string>());
  for (double value : spec.values) {
    auto point = SweepPoint(spec, value, spec.seeds.front());
    if (!point.ok()) return point.status();
  }
  return spec;
}

absl::StatusOr<SweepSpec> LoadSweepSpec(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseSweepSpec(*text,
                        std::filesystem::path(path).parent_path().string());
}

absl::StatusOr<ExperimentConfig> SweepPoint(const SweepSpec& spec,
                                            double value, std::uint64_t seed) {
  ExperimentConfig config = spec.base;
  config.run.seed = seed;
  switch (spec.axis) {
    case SweepAxis::kEpsilon: {
      auto privacy = PrivacyParams::Create(value, config.run.privacy.delta);
      if (!privacy.ok()) return privacy.status();
      config.run.privacy = *privacy;
      const bool gradient_based =
          config.run.algorithm == Algorithm::kPg ||
          config.run.algorithm == Algorithm::kPgLogBarrier;
      if (privacy->is_private() && privacy->delta == 0.0 &&
          (gradient_based || config.run.oracle.kind == OracleKind::kRidge)) {
        return absl::InvalidArgumentError(
            "a finite epsilon with delta = 0 needs the exponential mechanism");
      }
      if (!gradient_based && privacy->is_private() &&
          config.run.oracle.kind == OracleKind::kExact) {
        return absl::InvalidArgumentError(
            "the exact oracle is not private; sweep it only at epsilon inf");
      }
      break;
    }
    case SweepAxis::kTotalSamples:
    case SweepAxis::kBatchSize: {
      if (!(value >= 1.0) || std::floor(value) != value) {
        return absl::InvalidArgumentError(
            "sample-count sweep values must be positive integers");
      }
      const long long v = static_cast<long long>(value);
      if (spec.axis == SweepAxis::kTotalSamples) {
        config.run.total_samples = v;
        // Hold m fixed and let T follow N, unless the base fixes T only.
        if (config.run.batch_size) config.run.iterations.reset();
      } else {
        config.run.batch_size = v;
        if (config.run.total_samples) config.run.iterations.reset();
      }
      break;
    }
  }
  return config;
}

}  // namespace dppo
