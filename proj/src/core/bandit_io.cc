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

#include "dppo/core/bandit_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dppo {

using nlohmann::json;

absl::StatusOr<BanditInstance> ParseBanditInstance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("instance is not valid JSON: %s", e.what()));
  }
  try {
    const int num_states = doc.at("num_states").get<int>();
    const int num_actions = doc.at("num_actions").get<int>();
    if (num_states <= 0 || num_actions <= 0) {
      return absl::InvalidArgumentError(
          "num_states and num_actions must be positive");
    }
    const auto rho = doc.at("rho").get<std::vector<double>>();
    const auto rewards = doc.at("rewards").get<std::vector<double>>();
    const double r_max = doc.at("r_max").get<double>();
    if (static_cast<int>(rho.size()) != num_states) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "rho has %d entries, expected %d", rho.size(), num_states));
    }
    if (rewards.size() != static_cast<size_t>(num_states) * num_actions) {
      return absl::InvalidArgumentError(
          absl::StrFormat("rewards has %d entries, expected %d",
                          rewards.size(), num_states * num_actions));
    }
    Eigen::VectorXd rho_vec =
        Eigen::Map<const Eigen::VectorXd>(rho.data(), num_states);
    Eigen::MatrixXd reward_table =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(
            rewards.data(), num_states, num_actions);
    auto bandit = ContextualBandit::Create(std::move(rho_vec),
                                           std::move(reward_table), r_max);
    if (!bandit.ok()) return bandit.status();

    std::shared_ptr<const FeatureMap> features;
    if (doc.contains("features")) {
      const json& f = doc.at("features");
      auto values = f.at("values").get<std::vector<double>>();
      const double bound = f.value("bound", 0.0);
      auto map = FeatureMap::Dense(num_states, num_actions,
                                   f.at("dim").get<int>(), std::move(values),
                                   bound);
      if (!map.ok()) return map.status();
      features = std::make_shared<const FeatureMap>(*std::move(map));
    }
    return BanditInstance{*std::move(bandit), std::move(features)};
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed instance: %s", e.what()));
  }
}

absl::StatusOr<BanditInstance> LoadBanditInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open instance file %s", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseBanditInstance(buffer.str());
}

}  // namespace dppo
