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

#ifndef FSM__SCENARIO_HPP_
#define FSM__SCENARIO_HPP_

#include "fsm/kinematics.hpp"
#include "fsm/roadgraph.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsm
{

inline constexpr int kScenarioSchemaVersion = 1;

/// Invalid scenario content. Messages name the offending field.
class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class AgentRole { ego, oru };

struct ScenarioAgent
{
  std::string id;
  AgentRole role{AgentRole::oru};
  std::string type{"vehicle"};
  AgentBody body;
};

struct ObservedState
{
  KinematicState state;
  double z{0.0};
};

struct TimelineEntry
{
  double t{0.0};
  /// Parallel to Scenario::agents.
  std::vector<ObservedState> states;
};

struct Scenario
{
  std::string name;
  double cadence{0.1};
  Roadgraph roadgraph;
  std::vector<ScenarioAgent> agents;
  std::vector<TimelineEntry> timeline;

  /// Exactly one ego, full and uniformly spaced timeline, valid bodies.
  void validate() const;
  std::size_t ego_index() const;
};

Scenario parse_scenario(const nlohmann::ordered_json & doc);
Scenario load_scenario(const std::filesystem::path & path);

nlohmann::ordered_json scenario_to_json(const Scenario & scenario);
/// Canonical text form; loading and re-saving it reproduces the same bytes.
std::string dump_scenario(const Scenario & scenario);
void save_scenario(const Scenario & scenario, const std::filesystem::path & path);

}  // namespace fsm

#endif  // FSM__SCENARIO_HPP_
