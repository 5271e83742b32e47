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

#include "fsm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fsm
{
namespace
{

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string & where, const std::string & what)
{
  throw ScenarioError(where.empty() ? what : where + ": " + what);
}

std::string join(const std::string & where, const std::string & key)
{
  return where.empty() ? key : where + "." + key;
}

std::string indexed(const std::string & where, std::size_t i)
{
  return where + "[" + std::to_string(i) + "]";
}

const ordered_json & field(const ordered_json & obj, const std::string & where, const char * key)
{
  if (!obj.is_object()) {
    fail(where, "expected an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(join(where, key), "missing field");
  }
  return *it;
}

double number(const ordered_json & value, const std::string & where)
{
  if (!value.is_number()) {
    fail(where, "expected a number");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    fail(where, "expected a finite number");
  }
  return v;
}

double number_field(const ordered_json & obj, const std::string & where, const char * key)
{
  return number(field(obj, where, key), join(where, key));
}

double optional_number(
  const ordered_json & obj, const std::string & where, const char * key, double fallback)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  return number(obj.at(key), join(where, key));
}

std::string string_field(const ordered_json & obj, const std::string & where, const char * key)
{
  const auto & value = field(obj, where, key);
  if (!value.is_string()) {
    fail(join(where, key), "expected a string");
  }
  return value.get<std::string>();
}

const ordered_json & array_field(const ordered_json & obj, const std::string & where, const char * key)
{
  const auto & value = field(obj, where, key);
  if (!value.is_array()) {
    fail(join(where, key), "expected an array");
  }
  return value;
}

std::vector<Vec2> parse_points(const ordered_json & arr, const std::string & where)
{
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto & p = arr[i];
    const std::string at = indexed(where, i);
    if (!p.is_array() || p.size() != 2) {
      fail(at, "expected [x, y]");
    }
    out.push_back({number(p[0], at + "[0]"), number(p[1], at + "[1]")});
  }
  return out;
}

Lane parse_lane(const ordered_json & obj, const std::string & where)
{
  Lane lane;
  lane.id = string_field(obj, where, "id");
  const auto & cl = array_field(obj, where, "centerline");
  for (std::size_t i = 0; i < cl.size(); ++i) {
    const std::string at = indexed(join(where, "centerline"), i);
    const auto & p = cl[i];
    if (!p.is_array() || p.size() != 4) {
      fail(at, "expected [x, y, z, heading]");
    }
    lane.centerline.push_back(
      {number(p[0], at + "[0]"), number(p[1], at + "[1]"), number(p[2], at + "[2]"),
       number(p[3], at + "[3]")});
  }
  lane.left_boundary =
    parse_points(array_field(obj, where, "left_boundary"), join(where, "left_boundary"));
  lane.right_boundary =
    parse_points(array_field(obj, where, "right_boundary"), join(where, "right_boundary"));
  const auto & succ = array_field(obj, where, "successors");
  for (std::size_t i = 0; i < succ.size(); ++i) {
    if (!succ[i].is_string()) {
      fail(indexed(join(where, "successors"), i), "expected a string");
    }
    lane.successor_ids.push_back(succ[i].get<std::string>());
  }
  return lane;
}

ScenarioAgent parse_agent(const ordered_json & obj, const std::string & where)
{
  ScenarioAgent agent;
  agent.id = string_field(obj, where, "id");
  if (agent.id.empty()) {
    fail(join(where, "id"), "must not be empty");
  }
  const std::string role = string_field(obj, where, "role");
  if (role == "ego") {
    agent.role = AgentRole::ego;
  } else if (role == "oru") {
    agent.role = AgentRole::oru;
  } else {
    fail(join(where, "role"), "expected \"ego\" or \"oru\", got \"" + role + "\"");
  }
  agent.type = string_field(obj, where, "type");
  agent.body.length = number_field(obj, where, "length");
  agent.body.width = number_field(obj, where, "width");
  agent.body.wheelbase = number_field(obj, where, "wheelbase");
  agent.body.max_yaw_rate =
    optional_number(obj, where, "max_yaw_rate", agent.body.max_yaw_rate);
  if (obj.contains("model")) {
    const std::string model = string_field(obj, where, "model");
    if (model == "bicycle") {
      agent.body.model = ModelKind::bicycle;
    } else if (model == "point_mass") {
      agent.body.model = ModelKind::point_mass;
    } else {
      fail(join(where, "model"), "expected \"bicycle\" or \"point_mass\"");
    }
  }
  try {
    agent.body.validate();
  } catch (const std::invalid_argument & e) {
    fail(where, e.what());
  }
  return agent;
}

ObservedState parse_state(const ordered_json & obj, const std::string & where)
{
  ObservedState s;
  s.state.x = number_field(obj, where, "x");
  s.state.y = number_field(obj, where, "y");
  s.state.yaw = number_field(obj, where, "yaw");
  s.state.speed = number_field(obj, where, "speed");
  s.state.accel_long = number_field(obj, where, "accel_long");
  s.state.accel_lat = number_field(obj, where, "accel_lat");
  s.z = optional_number(obj, where, "z", 0.0);
  if (s.state.speed < 0.0) {
    fail(join(where, "speed"), "must be non-negative");
  }
  return s;
}

ordered_json points_json(const std::vector<Vec2> & pts)
{
  ordered_json arr = ordered_json::array();
  for (const auto & p : pts) {
    arr.push_back({p.x, p.y});
  }
  return arr;
}

}  // namespace

void Scenario::validate() const
{
  if (!(cadence > 0.0) || !std::isfinite(cadence)) {
    throw ScenarioError("cadence: must be positive");
  }
  std::size_t egos = 0;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto & a = agents[i];
    if (!ids.insert(a.id).second) {
      throw ScenarioError(indexed("agents", i) + ".id: duplicate agent id '" + a.id + "'");
    }
    if (a.role == AgentRole::ego) {
      ++egos;
    }
    try {
      a.body.validate();
    } catch (const std::invalid_argument & e) {
      throw ScenarioError(indexed("agents", i) + ": " + e.what());
    }
  }
  if (egos == 0) {
    throw ScenarioError("no ego agent");
  }
  if (egos > 1) {
    throw ScenarioError("more than one ego agent");
  }
  if (timeline.empty()) {
    throw ScenarioError("timeline: must contain at least one entry");
  }
  for (std::size_t k = 0; k < timeline.size(); ++k) {
    const auto & entry = timeline[k];
    if (entry.states.size() != agents.size()) {
      throw ScenarioError(
        indexed("timeline", k) + ".states: expected one state per agent (" +
        std::to_string(agents.size()) + "), got " + std::to_string(entry.states.size()));
    }
    if (k > 0) {
      const double gap = entry.t - timeline[k - 1].t;
      if (std::abs(gap - cadence) > 0.01 * cadence) {
        throw ScenarioError(
          indexed("timeline", k) + ".t: spacing " + std::to_string(gap) +
          " s does not match cadence " + std::to_string(cadence) + " s");
      }
    }
  }
}

std::size_t Scenario::ego_index() const
{
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].role == AgentRole::ego) {
      return i;
    }
  }
  throw ScenarioError("no ego agent");
}

Scenario parse_scenario(const ordered_json & doc)
{
  if (!doc.is_object()) {
    fail("", "scenario document must be an object");
  }
  const auto & version = field(doc, "", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kScenarioSchemaVersion) {
    fail(
      "schema_version",
      "unsupported version " + version.dump() + ", expected " +
        std::to_string(kScenarioSchemaVersion));
  }

  Scenario sc;
  sc.name = string_field(doc, "", "name");
  sc.cadence = number_field(doc, "", "cadence");

  const auto & rg = field(doc, "", "roadgraph");
  const Polygon road = parse_points(array_field(rg, "roadgraph", "road_polygon"), "roadgraph.road_polygon");
  const auto & lanes_json = array_field(rg, "roadgraph", "lanes");
  std::vector<Lane> lanes;
  for (std::size_t i = 0; i < lanes_json.size(); ++i) {
    lanes.push_back(parse_lane(lanes_json[i], indexed("roadgraph.lanes", i)));
  }
  try {
    sc.roadgraph = Roadgraph(std::move(lanes), road);
  } catch (const RoadgraphError & e) {
    fail("roadgraph", e.what());
  }

  const auto & agents = array_field(doc, "", "agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    sc.agents.push_back(parse_agent(agents[i], indexed("agents", i)));
  }
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    slot.emplace(sc.agents[i].id, i);
  }

  const auto & timeline = array_field(doc, "", "timeline");
  for (std::size_t k = 0; k < timeline.size(); ++k) {
    const std::string at = indexed("timeline", k);
    TimelineEntry entry;
    entry.t = number_field(timeline[k], at, "t");
    const auto & states = array_field(timeline[k], at, "states");
    entry.states.resize(sc.agents.size());
    std::vector<bool> seen(sc.agents.size(), false);
    for (std::size_t j = 0; j < states.size(); ++j) {
      const std::string sat = indexed(join(at, "states"), j);
      const std::string agent_id = string_field(states[j], sat, "agent");
      const auto it = slot.find(agent_id);
      if (it == slot.end()) {
        fail(join(sat, "agent"), "unknown agent id '" + agent_id + "'");
      }
      if (seen[it->second]) {
        fail(join(sat, "agent"), "duplicate state for agent '" + agent_id + "'");
      }
      seen[it->second] = true;
      entry.states[it->second] = parse_state(states[j], sat);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        fail(join(at, "states"), "missing state for agent '" + sc.agents[i].id + "'");
      }
    }
    sc.timeline.push_back(std::move(entry));
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  }
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw ScenarioError("'" + path.string() + "': malformed JSON: " + e.what());
  }
  return parse_scenario(doc);
}

ordered_json scenario_to_json(const Scenario & sc)
{
  ordered_json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = sc.name;
  doc["cadence"] = sc.cadence;

  ordered_json lanes = ordered_json::array();
  for (const auto & lane : sc.roadgraph.lanes()) {
    ordered_json l;
    l["id"] = lane.id;
    ordered_json cl = ordered_json::array();
    for (const auto & p : lane.centerline) {
      cl.push_back({p.x, p.y, p.z, p.heading});
    }
    l["centerline"] = std::move(cl);
    l["left_boundary"] = points_json(lane.left_boundary);
    l["right_boundary"] = points_json(lane.right_boundary);
    l["successors"] = lane.successor_ids;
    lanes.push_back(std::move(l));
  }
  doc["roadgraph"]["road_polygon"] = points_json(sc.roadgraph.road_polygon());
  doc["roadgraph"]["lanes"] = std::move(lanes);

  ordered_json agents = ordered_json::array();
  for (const auto & a : sc.agents) {
    ordered_json j;
    j["id"] = a.id;
    j["role"] = a.role == AgentRole::ego ? "ego" : "oru";
    j["type"] = a.type;
    j["length"] = a.body.length;
    j["width"] = a.body.width;
    j["wheelbase"] = a.body.wheelbase;
    j["model"] = a.body.model == ModelKind::bicycle ? "bicycle" : "point_mass";
    j["max_yaw_rate"] = a.body.max_yaw_rate;
    agents.push_back(std::move(j));
  }
  doc["agents"] = std::move(agents);

  ordered_json timeline = ordered_json::array();
  for (const auto & entry : sc.timeline) {
    ordered_json e;
    e["t"] = entry.t;
    ordered_json states = ordered_json::array();
    for (std::size_t i = 0; i < entry.states.size(); ++i) {
      const auto & s = entry.states[i];
      ordered_json j;
      j["agent"] = sc.agents.at(i).id;
      j["x"] = s.state.x;
      j["y"] = s.state.y;
      j["yaw"] = s.state.yaw;
      j["speed"] = s.state.speed;
      j["accel_long"] = s.state.accel_long;
      j["accel_lat"] = s.state.accel_lat;
      j["z"] = s.z;
      states.push_back(std::move(j));
    }
    e["states"] = std::move(states);
    timeline.push_back(std::move(e));
  }
  doc["timeline"] = std::move(timeline);
  return doc;
}

std::string dump_scenario(const Scenario & scenario)
{
  return scenario_to_json(scenario).dump(1) + "\n";
}

void save_scenario(const Scenario & scenario, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ScenarioError("cannot write scenario file '" + path.string() + "'");
  }
  out << dump_scenario(scenario);
}

}  // namespace fsm
