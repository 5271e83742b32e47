// Copyright 2026 The FSM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSM__CONFIG_HPP_
#define FSM__CONFIG_HPP_

#include "fsm/reachability.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>

namespace fsm
{

/// Invalid run configuration. Messages name the offending key.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  AssumptionSet assumptions{AssumptionSet::defaults()};
  EgoLaneRestriction ego_lane_restriction{EgoLaneRestriction::unrestricted};
  /// Minimum length of a run of violating frames counted as an FSM violation.
  double fsm_violation_min_s{1.0};
  /// Lag of the drivable-area delta series.
  double area_lag_s{1.0};
  std::uint64_t seed{0};
  int workers{1};
  bool render{false};
  /// Replaces the ego's profile pair; other road users keep their type's.
  std::optional<ProfilePair> ego_profiles;

  /// Throws ConfigError.
  void validate() const;
  const ProfilePair & ego_profile_pair(const std::string & ego_type) const;
};

/// Every key is optional and falls back to the default; unknown keys are
/// rejected. Profiles may be given partially.
RunConfig parse_run_config(const nlohmann::json & doc);
RunConfig load_run_config(const std::filesystem::path & path);
nlohmann::ordered_json run_config_to_json(const RunConfig & config);

}  // namespace fsm

#endif  // FSM__CONFIG_HPP_
