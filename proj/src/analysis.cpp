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

#include "fsm/analysis.hpp"

#include "fsm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fsm
{

RasterSpec scenario_raster_spec(const Scenario & scenario, const AssumptionSet & assumptions)
{
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  auto grow = [&](Vec2 p, double r) {
    lo.x = std::min(lo.x, p.x - r);
    lo.y = std::min(lo.y, p.y - r);
    hi.x = std::max(hi.x, p.x + r);
    hi.y = std::max(hi.y, p.y + r);
  };
  for (const auto & p : scenario.roadgraph.road_polygon()) {
    grow(p, 0.0);
  }
  for (const auto & entry : scenario.timeline) {
    for (std::size_t i = 0; i < entry.states.size(); ++i) {
      const auto & body = scenario.agents[i].body;
      grow({entry.states[i].state.x, entry.states[i].state.y}, std::hypot(body.length, body.width));
    }
  }
  const double m = assumptions.raster_margin;
  return RasterSpec::covering({lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}, assumptions.raster_resolution);
}

FrameAgent frame_agent(const Scenario & scenario, std::size_t frame, std::size_t agent)
{
  const auto & a = scenario.agents.at(agent);
  const auto & s = scenario.timeline.at(frame).states.at(agent);
  FrameAgent out;
  out.id = a.id;
  out.type = a.type;
  out.body = a.body;
  out.state = s.state;
  out.z = s.z;
  return out;
}

FrameArtifacts analyze_frame(
  const Scenario & scenario, std::size_t frame, const RunConfig & config, const RasterSpec & spec)
{
  FrameArtifacts art;
  art.frame_index = frame;
  art.spec = spec;
  const std::size_t ego_idx = scenario.ego_index();
  art.ego = frame_agent(scenario, frame, ego_idx);
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    if (i != ego_idx) {
      art.orus.push_back(frame_agent(scenario, frame, i));
    }
  }

  RolloutSettings settings;
  settings.spec = spec;
  settings.seed = config.seed;
  settings.frame_key = frame;
  settings.workers = 1;

  const auto & a = config.assumptions;
  art.oru_areas = compute_occupied_areas(art.orus, scenario.roadgraph, a, settings);
  for (const auto & area : art.oru_areas) {
    art.diagnostics.insert(art.diagnostics.end(), area.diagnostics.begin(), area.diagnostics.end());
  }

  AssumptionSet ego_assumptions = a;
  ego_assumptions.profiles[art.ego.type] = config.ego_profile_pair(art.ego.type);
  art.ego_reach = compute_drivable_area(
    art.ego, art.oru_areas, scenario.roadgraph, ego_assumptions, config.ego_lane_restriction,
    settings);
  art.result = frame_metrics(
    art.ego_reach.drivable, a.horizon, a.time_step, scenario.timeline.at(frame).t);
  return art;
}

AnalysisResult analyze(
  const Scenario & scenario, const RunConfig & config, const FrameCallback & on_frame)
{
  scenario.validate();
  config.validate();
  AnalysisResult out;
  out.scenario_name = scenario.name;
  out.spec = scenario_raster_spec(scenario, config.assumptions);
  const std::size_t n = scenario.timeline.size();
  out.frames.resize(n);
  out.diagnostics.resize(n);
  parallel_for(n, config.workers, [&](std::size_t k) {
    FrameArtifacts art = analyze_frame(scenario, k, config, out.spec);
    if (on_frame) {
      on_frame(art);
    }
    out.frames[k] = std::move(art.result);
    out.diagnostics[k] = std::move(art.diagnostics);
  });
  out.metrics = scenario_metrics(
    out.frames, config.fsm_violation_min_s, config.area_lag_s, scenario.cadence);
  return out;
}

SweepParam parse_sweep_param(const std::string & name)
{
  if (name == "replanning_delay") {
    return SweepParam::replanning_delay;
  }
  if (name == "a_min") {
    return SweepParam::accel_min;
  }
  if (name == "roadgraph") {
    return SweepParam::roadgraph;
  }
  throw ConfigError("sweep parameter '" + name + "' is not one of replanning_delay, a_min, roadgraph");
}

RunConfig apply_sweep_value(const RunConfig & base, SweepParam param, const std::string & value)
{
  RunConfig cfg = base;
  if (param == SweepParam::roadgraph) {
    if (value == "unrestricted") {
      cfg.ego_lane_restriction = EgoLaneRestriction::unrestricted;
    } else if (value == "in_lane") {
      cfg.ego_lane_restriction = EgoLaneRestriction::in_lane;
    } else {
      throw ConfigError("roadgraph sweep value '" + value + "' is not unrestricted or in_lane");
    }
    return cfg;
  }
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
  } catch (const std::exception &) {
    throw ConfigError("sweep value '" + value + "' is not a number");
  }
  ProfilePair pair = cfg.ego_profile_pair("vehicle");
  if (param == SweepParam::replanning_delay) {
    pair.normal.replanning_delay = v;
  } else {
    pair.surprising.accel_min = v;
  }
  cfg.ego_profiles = pair;
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json metrics_report(const AnalysisResult & result, const RunConfig & config)
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = result.scenario_name;
  j["config"] = run_config_to_json(config);
  ordered_json raster;
  raster["origin_x"] = result.spec.origin_x;
  raster["origin_y"] = result.spec.origin_y;
  raster["resolution"] = result.spec.resolution;
  raster["width"] = result.spec.width;
  raster["height"] = result.spec.height;
  j["raster"] = std::move(raster);

  const auto & m = result.metrics;
  j["frame_count"] = result.frames.size();
  j["frame_violation_rate"] = m.frame_violation_rate;
  ordered_json intervals = ordered_json::array();
  for (const auto & iv : m.fsm_violations) {
    intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}});
  }
  j["fsm_violations"] = std::move(intervals);
  j["cadence"] = m.cadence;
  j["area_lag_frames"] = m.lag_frames;

  ordered_json frames = ordered_json::array();
  for (std::size_t k = 0; k < result.frames.size(); ++k) {
    const auto & f = result.frames[k];
    ordered_json fj;
    fj["t"] = f.t;
    fj["frame_violation"] = f.frame_violation;
    fj["generalized_ttc"] = f.generalized_ttc;
    fj["generalized_ttc_kind"] = f.ttc_is_sentinel ? "no-violation" : "first-empty-tau";
    ordered_json areas = ordered_json::array();
    for (const auto & ta : f.drivable_per_tau) {
      areas.push_back(ta.area_m2);
    }
    fj["drivable_area_m2"] = std::move(areas);
    ordered_json deltas = ordered_json::array();
    if (k < m.area_delta_series.size()) {
      for (const auto & d : m.area_delta_series[k]) {
        deltas.push_back(d ? ordered_json(*d) : ordered_json(nullptr));
      }
    }
    fj["drivable_area_delta_m2"] = std::move(deltas);
    fj["diagnostics"] = result.diagnostics.at(k);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j;
}

}  // namespace fsm
