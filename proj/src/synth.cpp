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

#include "fsm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace fsm
{
namespace
{

ScenarioAgent vehicle(const std::string & id, AgentRole role)
{
  ScenarioAgent a;
  a.id = id;
  a.role = role;
  return a;
}

ObservedState observed(double x, double y, double yaw, double speed, double accel = 0.0)
{
  ObservedState s;
  s.state = {x, y, yaw, speed, accel, 0.0};
  return s;
}

int frame_count(double duration, double cadence)
{
  return static_cast<int>(std::floor(duration / cadence + 1e-9)) + 1;
}

}  // namespace

Lane straight_lane(
  const std::string & id, Vec2 start, Vec2 end, double width, std::vector<std::string> successors)
{
  const Vec2 d = end - start;
  const double len = norm(d);
  if (!(len > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("straight_lane: degenerate lane '" + id + "'");
  }
  const Vec2 u = d * (1.0 / len);
  const Vec2 left{-u.y, u.x};
  const double heading = std::atan2(u.y, u.x);
  Lane lane;
  lane.id = id;
  lane.centerline = {{start.x, start.y, 0.0, heading}, {end.x, end.y, 0.0, heading}};
  lane.left_boundary = {start + left * (width / 2), end + left * (width / 2)};
  lane.right_boundary = {start - left * (width / 2), end - left * (width / 2)};
  lane.successor_ids = std::move(successors);
  return lane;
}

Scenario synth_tailgate(const TailgateParams & p)
{
  if (!(p.gap_s > 0.0) || !(p.speed > 0.0) || p.lanes < 1) {
    throw std::invalid_argument("synth_tailgate: gap, speed and lane count must be positive");
  }
  constexpr double kRoadStart = -100.0;
  constexpr double kSegment = 100.0;
  constexpr int kSegments = 8;
  const double w = p.lane_width;

  std::vector<Lane> lanes;
  for (int i = 0; i < p.lanes; ++i) {
    const double y = -i * w;
    for (int k = 0; k < kSegments; ++k) {
      const std::string id = "L" + std::to_string(i) + "s" + std::to_string(k);
      std::vector<std::string> succ;
      if (k + 1 < kSegments) {
        succ.push_back("L" + std::to_string(i) + "s" + std::to_string(k + 1));
      }
      lanes.push_back(straight_lane(
        id, {kRoadStart + k * kSegment, y}, {kRoadStart + (k + 1) * kSegment, y}, w,
        std::move(succ)));
    }
  }
  const double road_end = kRoadStart + kSegments * kSegment;
  const double top = w / 2 + p.shoulder_width;
  const double bottom = -(p.lanes - 1) * w - w / 2 - 0.5;
  Polygon road{{kRoadStart, bottom}, {road_end, bottom}, {road_end, top}, {kRoadStart, top}};

  Scenario sc;
  char name[48];
  std::snprintf(name, sizeof(name), "tailgate-gap-%.2fs", p.gap_s);
  sc.name = name;
  sc.cadence = p.cadence;
  sc.roadgraph = Roadgraph(std::move(lanes), std::move(road));

  const AgentBody body;
  sc.agents.push_back(vehicle("ego", AgentRole::ego));
  sc.agents.push_back(vehicle("lead", AgentRole::oru));
  if (p.lanes >= 2) {
    sc.agents.push_back(vehicle("beside", AgentRole::oru));
  }
  if (p.lanes >= 3) {
    sc.agents.push_back(vehicle("outer", AgentRole::oru));
  }

  const double spacing = p.gap_s * p.speed;
  const double omega = 2.0 * std::numbers::pi / p.duration;
  const double lead_x0 = 150.0;
  const double ego_x0 = lead_x0 - body.length - spacing;
  const int n = frame_count(p.duration, p.cadence);
  for (int k = 0; k < n; ++k) {
    const double t = k * p.cadence;
    TimelineEntry e;
    e.t = t;
    const double travel = p.speed * t;
    const double wobble = p.spacing_wobble * std::sin(omega * t);
    const double wobble_rate = p.spacing_wobble * omega * std::cos(omega * t);
    const double wobble_accel = -p.spacing_wobble * omega * omega * std::sin(omega * t);
    e.states.push_back(observed(
      ego_x0 + travel - wobble, 0.0, 0.0, p.speed - wobble_rate, -wobble_accel));
    e.states.push_back(observed(lead_x0 + travel, 0.0, 0.0, p.speed));
    if (p.lanes >= 2) {
      e.states.push_back(observed(lead_x0 + travel - 20.0, -w, 0.0, p.speed));
    }
    if (p.lanes >= 3) {
      e.states.push_back(observed(lead_x0 + travel + 10.0, -2 * w, 0.0, p.speed));
    }
    sc.timeline.push_back(std::move(e));
  }
  sc.validate();
  return sc;
}

Scenario synth_tailgate(double gap_s, double speed, int lanes)
{
  TailgateParams p;
  p.gap_s = gap_s;
  p.speed = speed;
  p.lanes = lanes;
  return synth_tailgate(p);
}

double sdli_ego_accel(const SdliParams & p, double t)
{
  const double t0 = p.cut_in_time + p.brake_delay;
  const double ramp = std::abs(p.brake_accel) / p.brake_jerk;
  if (t <= t0) {
    return 0.0;
  }
  if (t <= t0 + ramp) {
    return -p.brake_jerk * (t - t0);
  }
  if (t <= t0 + ramp + p.brake_hold) {
    return p.brake_accel;
  }
  if (t <= t0 + 2 * ramp + p.brake_hold) {
    return p.brake_accel + p.brake_jerk * (t - t0 - ramp - p.brake_hold);
  }
  return 0.0;
}

Scenario synth_sdli(const SdliParams & p)
{
  if (!(p.cut_in_time > 0.0) || !(p.lateral_rate > 0.0) || !(p.speed > 0.0) ||
      !(p.brake_jerk > 0.0) || !(p.brake_accel < 0.0))
  {
    throw std::invalid_argument("synth_sdli: parameters must be positive");
  }
  const double w = p.lane_width;
  std::vector<Lane> lanes{
    straight_lane("E", {-50.0, 0.0}, {600.0, 0.0}, w),
    straight_lane("R", {-50.0, -w}, {600.0, -w}, w)};
  Polygon road{{-50.0, -1.5 * w - 0.25}, {600.0, -1.5 * w - 0.25}, {600.0, 0.5 * w + 0.25},
               {-50.0, 0.5 * w + 0.25}};

  Scenario sc;
  sc.name = "sdli";
  sc.cadence = p.cadence;
  sc.roadgraph = Roadgraph(std::move(lanes), std::move(road));
  sc.agents.push_back(vehicle("ego", AgentRole::ego));
  sc.agents.push_back(vehicle("initiator", AgentRole::oru));

  const AgentBody body;
  const double initiator_x0 = body.length + p.initial_gap;
  const double shift_time = w / p.lateral_rate;
  const int n = frame_count(p.duration, p.cadence);

  constexpr double kFine = 1e-3;
  const int substeps = static_cast<int>(std::lround(p.cadence / kFine));
  double x = 0.0;
  double v = p.speed;
  double t = 0.0;
  for (int k = 0; k < n; ++k) {
    TimelineEntry e;
    e.t = k * p.cadence;
    e.states.push_back(observed(x, 0.0, 0.0, v, sdli_ego_accel(p, e.t)));

    const double moving = std::clamp(e.t - p.cut_in_time, 0.0, shift_time);
    const bool shifting = e.t > p.cut_in_time && e.t < p.cut_in_time + shift_time;
    const double vy = shifting ? p.lateral_rate : 0.0;
    e.states.push_back(observed(
      initiator_x0 + p.speed * e.t, -w + p.lateral_rate * moving, std::atan2(vy, p.speed),
      std::hypot(p.speed, vy)));
    sc.timeline.push_back(std::move(e));

    for (int s = 0; s < substeps; ++s) {
      const double a0 = sdli_ego_accel(p, t);
      const double a1 = sdli_ego_accel(p, t + kFine);
      const double v1 = std::max(0.0, v + 0.5 * (a0 + a1) * kFine);
      x += 0.5 * (v + v1) * kFine;
      v = v1;
      t += kFine;
    }
    t = (k + 1) * p.cadence;
  }
  sc.validate();
  return sc;
}

Scenario synth_sdli(double cut_in_time, double lateral_rate)
{
  SdliParams p;
  p.cut_in_time = cut_in_time;
  p.lateral_rate = lateral_rate;
  return synth_sdli(p);
}

Scenario synth_scp(const ScpTraffic & traffic)
{
  const double w = traffic.lane_width;
  constexpr double kHalfLength = 150.0;
  constexpr double kSideLength = 60.0;
  std::vector<Lane> lanes{
    straight_lane("D", {-kHalfLength, 0.5 * w}, {kHalfLength, 0.5 * w}, w),
    straight_lane("C", {-kHalfLength, 1.5 * w}, {kHalfLength, 1.5 * w}, w),
    straight_lane("M_east", {-kHalfLength, 2.5 * w}, {kHalfLength, 2.5 * w}, w),
    straight_lane("M_west", {kHalfLength, 2.5 * w}, {-kHalfLength, 2.5 * w}, w),
    straight_lane("B", {kHalfLength, 3.5 * w}, {-kHalfLength, 3.5 * w}, w),
    straight_lane("A", {kHalfLength, 4.5 * w}, {-kHalfLength, 4.5 * w}, w),
    straight_lane("S_north", {0.5 * w, -kSideLength}, {0.5 * w, 0.0}, w),
    straight_lane("S_south", {-0.5 * w, 0.0}, {-0.5 * w, -kSideLength}, w)};
  const double r = traffic.curb_return;
  const double top = 5 * w + traffic.far_shoulder;
  Polygon road{{-kHalfLength, 0.0}, {-w - r, 0.0}, {-w, -r},          {-w, -kSideLength},
               {w, -kSideLength},   {w, -r},       {w + r, 0.0},      {kHalfLength, 0.0},
               {kHalfLength, top},  {-kHalfLength, top}};

  Scenario sc;
  sc.name = "scp";
  sc.cadence = traffic.cadence;
  sc.roadgraph = Roadgraph(std::move(lanes), std::move(road));
  sc.agents.push_back(vehicle("ego", AgentRole::ego));
  if (traffic.eastbound) {
    sc.agents.push_back(vehicle("cross_c", AgentRole::oru));
  }
  if (traffic.westbound) {
    sc.agents.push_back(vehicle("cross_b", AgentRole::oru));
  }

  const AgentBody body;
  const int n = frame_count(traffic.duration, traffic.cadence);
  for (int k = 0; k < n; ++k) {
    TimelineEntry e;
    e.t = k * traffic.cadence;
    e.states.push_back(
      observed(0.5 * w, -traffic.stop_offset - body.length / 2, std::numbers::pi / 2, 0.0));
    if (traffic.eastbound) {
      e.states.push_back(observed(
        traffic.eastbound_x + traffic.eastbound_speed * e.t, 1.5 * w, 0.0,
        traffic.eastbound_speed));
    }
    if (traffic.westbound) {
      e.states.push_back(observed(
        traffic.westbound_x - traffic.westbound_speed * e.t, 3.5 * w, std::numbers::pi,
        traffic.westbound_speed));
    }
    sc.timeline.push_back(std::move(e));
  }
  sc.validate();
  return sc;
}

}  // namespace fsm
