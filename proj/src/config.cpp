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

#include "fsm/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <string>

namespace fsm
{
namespace
{

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(
  const json & obj, const std::string & where, std::initializer_list<const char *> known)
{
  if (!obj.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
  for (const auto & item : obj.items()) {
    bool ok = false;
    for (const char * k : known) {
      ok = ok || item.key() == k;
    }
    if (!ok) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void read(const json & obj, const std::string & where, const char * key, T & out)
{
  if (!obj.contains(key)) {
    return;
  }
  const auto & v = obj.at(key);
  const std::string at = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) {
      throw ConfigError(at + ": expected a boolean");
    }
    out = v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw ConfigError(at + ": expected an integer");
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) {
        out = v.get<T>();
      } else if (v.get<std::int64_t>() >= 0) {
        out = static_cast<T>(v.get<std::int64_t>());
      } else {
        throw ConfigError(at + ": expected a non-negative integer");
      }
    } else {
      out = v.get<T>();
    }
  } else {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ConfigError(at + ": expected a finite number");
    }
    out = v.get<T>();
  }
}

void read_profile(const json & obj, const std::string & where, KinematicProfile & p)
{
  reject_unknown(
    obj, where,
    {"speed_min", "speed_max", "accel_min", "accel_max", "lateral_accel_max", "jerk_min",
     "jerk_max", "lateral_jerk_max", "replanning_delay"});
  read(obj, where, "speed_min", p.speed_min);
  read(obj, where, "speed_max", p.speed_max);
  read(obj, where, "accel_min", p.accel_min);
  read(obj, where, "accel_max", p.accel_max);
  read(obj, where, "lateral_accel_max", p.lateral_accel_max);
  read(obj, where, "jerk_min", p.jerk_min);
  read(obj, where, "jerk_max", p.jerk_max);
  read(obj, where, "lateral_jerk_max", p.lateral_jerk_max);
  read(obj, where, "replanning_delay", p.replanning_delay);
}

void read_pair(const json & obj, const std::string & where, ProfilePair & pair)
{
  reject_unknown(obj, where, {"normal", "surprising"});
  if (obj.contains("normal")) {
    read_profile(obj.at("normal"), where + ".normal", pair.normal);
  }
  if (obj.contains("surprising")) {
    read_profile(obj.at("surprising"), where + ".surprising", pair.surprising);
  }
}

ordered_json profile_json(const KinematicProfile & p)
{
  ordered_json j;
  j["speed_min"] = p.speed_min;
  j["speed_max"] = p.speed_max;
  j["accel_min"] = p.accel_min;
  j["accel_max"] = p.accel_max;
  j["lateral_accel_max"] = p.lateral_accel_max;
  j["jerk_min"] = p.jerk_min;
  j["jerk_max"] = p.jerk_max;
  j["lateral_jerk_max"] = p.lateral_jerk_max;
  j["replanning_delay"] = p.replanning_delay;
  return j;
}

ordered_json pair_json(const ProfilePair & pair)
{
  ordered_json j;
  j["normal"] = profile_json(pair.normal);
  j["surprising"] = profile_json(pair.surprising);
  return j;
}

}  // namespace

void RunConfig::validate() const
{
  try {
    assumptions.validate();
    if (ego_profiles) {
      ego_profiles->normal.validate();
      ego_profiles->surprising.validate();
    }
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
  if (!(fsm_violation_min_s > 0.0)) {
    throw ConfigError("fsm_violation_min_s: must be positive");
  }
  if (!(area_lag_s >= 0.0)) {
    throw ConfigError("area_lag_s: must be non-negative");
  }
  if (workers < 1) {
    throw ConfigError("workers: must be at least 1");
  }
}

const ProfilePair & RunConfig::ego_profile_pair(const std::string & ego_type) const
{
  return ego_profiles ? *ego_profiles : assumptions.profiles_for(ego_type);
}

RunConfig parse_run_config(const json & doc)
{
  RunConfig cfg;
  reject_unknown(
    doc, "config",
    {"assumptions", "ego_lane_restriction", "fsm_violation_min_s", "area_lag_s", "seed",
     "workers", "render", "ego_profiles"});
  if (doc.contains("assumptions")) {
    const auto & a = doc.at("assumptions");
    const std::string where = "config.assumptions";
    reject_unknown(
      a, where,
      {"profiles", "time_step", "horizon", "lane_alignment_deg", "raster_resolution",
       "interior_samples", "perimeter_samples", "z_max", "padding", "raster_margin"});
    auto & s = cfg.assumptions;
    read(a, where, "time_step", s.time_step);
    read(a, where, "horizon", s.horizon);
    if (a.contains("lane_alignment_deg")) {
      double deg = 0.0;
      read(a, where, "lane_alignment_deg", deg);
      s.lane_alignment = deg * std::numbers::pi / 180.0;
    }
    read(a, where, "raster_resolution", s.raster_resolution);
    read(a, where, "interior_samples", s.interior_samples);
    read(a, where, "perimeter_samples", s.perimeter_samples);
    read(a, where, "z_max", s.z_max);
    read(a, where, "padding", s.padding);
    read(a, where, "raster_margin", s.raster_margin);
    if (a.contains("profiles")) {
      const auto & profiles = a.at("profiles");
      if (!profiles.is_object()) {
        throw ConfigError(where + ".profiles: expected an object");
      }
      for (const auto & item : profiles.items()) {
        auto & pair = s.profiles[item.key()];
        read_pair(item.value(), where + ".profiles." + item.key(), pair);
      }
    }
  }
  if (doc.contains("ego_lane_restriction")) {
    const auto & v = doc.at("ego_lane_restriction");
    if (v == "unrestricted") {
      cfg.ego_lane_restriction = EgoLaneRestriction::unrestricted;
    } else if (v == "in_lane") {
      cfg.ego_lane_restriction = EgoLaneRestriction::in_lane;
    } else {
      throw ConfigError(
        "config.ego_lane_restriction: expected \"unrestricted\" or \"in_lane\", got " + v.dump());
    }
  }
  read(doc, "config", "fsm_violation_min_s", cfg.fsm_violation_min_s);
  read(doc, "config", "area_lag_s", cfg.area_lag_s);
  read(doc, "config", "seed", cfg.seed);
  read(doc, "config", "workers", cfg.workers);
  read(doc, "config", "render", cfg.render);
  if (doc.contains("ego_profiles")) {
    ProfilePair pair = cfg.assumptions.profiles.at("vehicle");
    read_pair(doc.at("ego_profiles"), "config.ego_profiles", pair);
    cfg.ego_profiles = pair;
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ConfigError("'" + path.string() + "': malformed JSON: " + e.what());
  }
  return parse_run_config(doc);
}

ordered_json run_config_to_json(const RunConfig & cfg)
{
  ordered_json j;
  const auto & s = cfg.assumptions;
  ordered_json a;
  a["time_step"] = s.time_step;
  a["horizon"] = s.horizon;
  a["lane_alignment_deg"] = s.lane_alignment * 180.0 / std::numbers::pi;
  a["raster_resolution"] = s.raster_resolution;
  a["interior_samples"] = s.interior_samples;
  a["perimeter_samples"] = s.perimeter_samples;
  a["z_max"] = s.z_max;
  a["padding"] = s.padding;
  a["raster_margin"] = s.raster_margin;
  ordered_json profiles;
  for (const auto & [type, pair] : s.profiles) {
    profiles[type] = pair_json(pair);
  }
  a["profiles"] = std::move(profiles);
  j["assumptions"] = std::move(a);
  j["ego_lane_restriction"] =
    cfg.ego_lane_restriction == EgoLaneRestriction::in_lane ? "in_lane" : "unrestricted";
  j["fsm_violation_min_s"] = cfg.fsm_violation_min_s;
  j["area_lag_s"] = cfg.area_lag_s;
  j["seed"] = cfg.seed;
  j["render"] = cfg.render;
  if (cfg.ego_profiles) {
    j["ego_profiles"] = pair_json(*cfg.ego_profiles);
  }
  return j;
}

}  // namespace fsm
