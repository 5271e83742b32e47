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

#include "fsm/reachability.hpp"

#include "fsm/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <unordered_set>

namespace fsm
{

AssumptionSet AssumptionSet::defaults()
{
  AssumptionSet set;
  set.profiles["vehicle"] = {light_vehicle_normal_profile(), light_vehicle_surprising_profile()};
  // No published limits for these types; moderate placeholders.
  set.profiles["cyclist"] = {
    {0.0, 12.0, -2.0, 1.5, 1.5, 1.5, 1.0, 1.0, 1.0},
    {0.0, 15.0, -5.0, 3.0, 4.0, 5.0, 4.0, 4.0, 0.0}};
  set.profiles["pedestrian"] = {
    {0.0, 2.5, -1.5, 1.5, 1.5, 2.0, 2.0, 2.0, 1.0},
    {0.0, 6.0, -3.0, 3.0, 3.0, 5.0, 5.0, 5.0, 0.0}};
  return set;
}

void AssumptionSet::validate() const
{
  auto fail = [](const std::string & what) { throw std::invalid_argument("assumptions: " + what); };
  if (!(time_step > 0.0)) fail("time_step must be positive");
  if (!(horizon > 0.0)) fail("horizon must be positive");
  const double ratio = horizon / time_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-6) fail("time_step must divide horizon");
  if (!(lane_alignment > 0.0 && lane_alignment < 0.5 * std::numbers::pi)) {
    fail("lane_alignment must lie in (0, pi/2)");
  }
  if (!(raster_resolution > 0.0)) fail("raster_resolution must be positive");
  if (interior_samples < 0) fail("interior_samples must be non-negative");
  if (perimeter_samples < 4) fail("perimeter_samples must be at least 4");
  if (!(z_max > 0.0)) fail("z_max must be positive");
  if (!(padding >= 0.0)) fail("padding must be non-negative");
  if (!(raster_margin >= 0.0)) fail("raster_margin must be non-negative");
  if (profiles.empty()) fail("no road-user profiles");
  for (const auto & [type, pair] : profiles) {
    try {
      pair.normal.validate();
      pair.surprising.validate();
    } catch (const std::invalid_argument & e) {
      fail(type + ": " + e.what());
    }
    const bool nested = pair.normal.accel_max <= pair.surprising.accel_max &&
                        pair.normal.accel_min >= pair.surprising.accel_min &&
                        pair.normal.lateral_accel_max <= pair.surprising.lateral_accel_max;
    if (!nested) fail(type + ": normal friction ellipse must lie inside the surprising one");
  }
}

int AssumptionSet::steps() const { return static_cast<int>(std::lround(horizon / time_step)); }

const ProfilePair & AssumptionSet::profiles_for(const std::string & road_user_type) const
{
  const auto it = profiles.find(road_user_type);
  if (it == profiles.end()) {
    throw std::invalid_argument("no kinematic profiles for road-user type '" + road_user_type + "'");
  }
  return it->second;
}

ProfileSchedule ProfileSchedule::responder(const ProfilePair & pair)
{
  return {pair.normal, pair.surprising, pair.normal.replanning_delay};
}

const KinematicProfile & ProfileSchedule::at_step(int step, double dt) const
{
  return step * dt < switch_time - 1e-9 ? before : after;
}

namespace
{
struct LiveParticle
{
  Particle particle;
  std::optional<RandomStream> rng;
};

std::vector<LiveParticle> spawn_particles(
  const KinematicState & initial, const KinematicProfile & profile, const AssumptionSet & assumptions,
  std::uint64_t seed, std::uint64_t stream_key)
{
  std::vector<LiveParticle> live;
  const auto perimeter = sample_perimeter_controls(profile, assumptions.perimeter_samples);
  live.reserve(perimeter.size() + static_cast<std::size_t>(assumptions.interior_samples));
  for (std::size_t i = 0; i < perimeter.size(); ++i) {
    Particle p;
    p.state = initial;
    p.control = perimeter[i];
    p.kind = ParticleKind::perimeter;
    p.birth_control_angle = 2.0 * std::numbers::pi * static_cast<double>(i) / perimeter.size();
    p.index = static_cast<int>(i);
    live.push_back({p, std::nullopt});
  }
  for (int j = 0; j < assumptions.interior_samples; ++j) {
    Particle p;
    p.state = initial;
    p.kind = ParticleKind::interior;
    p.index = static_cast<int>(perimeter.size()) + j;
    live.push_back({p, RandomStream(particle_seed(seed, stream_key, static_cast<std::uint64_t>(p.index)))});
  }
  return live;
}
}  // namespace

ReachableSequence rollout_agent(
  const KinematicState & initial, const AgentBody & body, const ProfileSchedule & schedule,
  const RolloutLimits & limits, const AssumptionSet & assumptions, const RasterSpec & spec,
  std::uint64_t seed, std::uint64_t stream_key)
{
  const int steps = assumptions.steps();
  const double dt = assumptions.time_step;
  if (!limits.obstacles.empty() && static_cast<int>(limits.obstacles.size()) < steps + 1) {
    throw std::invalid_argument("obstacle masks must cover every tau");
  }

  std::vector<LiveParticle> live =
    spawn_particles(initial, schedule.at_step(0, dt), assumptions, seed, stream_key);
  std::vector<CellSpan> spans;

  ReachableSequence out;
  out.reserve(static_cast<std::size_t>(steps) + 1);

  ReachablePerTau first{0, GroundRaster(spec), {}};
  box_spans(spec, {initial.x, initial.y}, initial.yaw, body.length, body.width, assumptions.padding, spans);
  first.occupied_mask.fill(spans);
  for (const auto & lp : live) {
    first.alive_particles.push_back(lp.particle);
  }
  out.push_back(std::move(first));

  const KinematicProfile * perimeter_profile = &schedule.at_step(0, dt);
  auto perimeter = sample_perimeter_controls(*perimeter_profile, assumptions.perimeter_samples);
  for (int k = 0; k < steps; ++k) {
    const KinematicProfile & profile = schedule.at_step(k, dt);
    if (!(profile == *perimeter_profile)) {
      perimeter_profile = &profile;
      perimeter = sample_perimeter_controls(profile, assumptions.perimeter_samples);
    }
    ReachablePerTau layer{k + 1, GroundRaster(spec), {}};
    const GroundRaster * obstacle = limits.obstacles.empty() ? nullptr : &limits.obstacles[k + 1];
    for (auto & lp : live) {
      Particle & p = lp.particle;
      if (!p.alive) {
        continue;
      }
      if (p.kind == ParticleKind::interior) {
        p.control = sample_interior_control(profile, *lp.rng);
      } else {
        p.control = perimeter[static_cast<std::size_t>(p.index)];
      }
      p.state = step(p.state, p.control, profile, body, dt);
      spans.clear();
      box_spans(spec, {p.state.x, p.state.y}, p.state.yaw, body.length, body.width, assumptions.padding, spans);
      if (limits.permitted != nullptr && !limits.permitted->all_set(spans)) {
        p.alive = false;
        continue;
      }
      if (obstacle != nullptr && obstacle->any_set(spans)) {
        p.alive = false;
        continue;
      }
      layer.occupied_mask.fill(spans);
      layer.alive_particles.push_back(p);
    }
    out.push_back(std::move(layer));
  }
  return out;
}

std::uint64_t agent_stream_key(const std::string & agent_id, std::uint64_t frame_key)
{
  return hash_id(agent_id) ^ mix_seed(frame_key);
}

LaneRestriction lane_restriction_for(
  const FrameAgent & agent, const Roadgraph & graph, const AssumptionSet & assumptions)
{
  const Footprint fp = agent_footprint(agent.body, agent.state);
  const LaneSet seed =
    seed_lanes(fp, agent.state.yaw, agent.z, graph, assumptions.lane_alignment, assumptions.z_max);
  if (seed.empty()) {
    return LaneRestriction::none();
  }
  const ProfilePair & pair = assumptions.profiles_for(agent.type);
  const double depth = pair.surprising.speed_max * assumptions.horizon + agent.body.length;
  return LaneRestriction::to(available_lanes(seed, graph, depth));
}

namespace
{
bool footprint_fits(const FrameAgent & agent, const GroundRaster & permitted, double padding)
{
  std::vector<CellSpan> spans;
  box_spans(
    permitted.spec(), {agent.state.x, agent.state.y}, agent.state.yaw, agent.body.length,
    agent.body.width, padding, spans);
  return permitted.all_set(spans);
}
}  // namespace

std::vector<OccupiedArea> compute_occupied_areas(
  std::span<const FrameAgent> orus, const Roadgraph & graph, const AssumptionSet & assumptions,
  const RolloutSettings & settings)
{
  std::vector<OccupiedArea> areas(orus.size());
  parallel_for(orus.size(), settings.workers, [&](std::size_t i) {
    const FrameAgent & oru = orus[i];
    OccupiedArea & area = areas[i];
    area.agent_id = oru.id;
    area.restriction = lane_restriction_for(oru, graph, assumptions);
    area.permitted = permitted_mask(area.restriction, graph, settings.spec);
    if (!area.restriction.unrestricted && !footprint_fits(oru, area.permitted, assumptions.padding)) {
      area.diagnostics.push_back(oru.id + ": footprint exceeds its lanes; using the road polygon");
      area.restriction = LaneRestriction::none();
      area.permitted = permitted_mask(area.restriction, graph, settings.spec);
    }
    if (!footprint_fits(oru, area.permitted, assumptions.padding)) {
      area.diagnostics.push_back(oru.id + ": footprint leaves the road polygon; no roadgraph pruning");
      area.roadgraph_pruned = false;
    }
    const ProfilePair & pair = assumptions.profiles_for(oru.type);
    RolloutLimits limits;
    limits.permitted = area.roadgraph_pruned ? &area.permitted : nullptr;
    area.reachable = rollout_agent(
      oru.state, oru.body, ProfileSchedule::constant(pair.surprising), limits, assumptions,
      settings.spec, settings.seed, agent_stream_key(oru.id, settings.frame_key));
  });
  return areas;
}

std::vector<GroundRaster> union_occupied(
  std::span<const OccupiedArea> areas, const AssumptionSet & assumptions, const RasterSpec & spec)
{
  std::vector<GroundRaster> merged(static_cast<std::size_t>(assumptions.steps()) + 1, GroundRaster(spec));
  for (const OccupiedArea & area : areas) {
    for (std::size_t k = 0; k < merged.size() && k < area.reachable.size(); ++k) {
      union_into(merged[k], area.reachable[k].occupied_mask);
    }
  }
  return merged;
}

EgoReach compute_drivable_area(
  const FrameAgent & ego, std::span<const OccupiedArea> oru_areas, const Roadgraph & graph,
  const AssumptionSet & assumptions, EgoLaneRestriction lane_mode, const RolloutSettings & settings)
{
  EgoReach reach;
  reach.restriction = lane_mode == EgoLaneRestriction::in_lane
                        ? lane_restriction_for(ego, graph, assumptions)
                        : LaneRestriction::none();
  reach.permitted = permitted_mask(reach.restriction, graph, settings.spec);

  const ProfileSchedule schedule = ProfileSchedule::responder(assumptions.profiles_for(ego.type));
  const std::uint64_t key = agent_stream_key(ego.id, settings.frame_key);

  const std::vector<GroundRaster> occupied = union_occupied(oru_areas, assumptions, settings.spec);
  RolloutLimits pruned{&reach.permitted, {}};
  RolloutLimits drivable{&reach.permitted, occupied};

  std::array<ReachableSequence *, 2> slots{&reach.reachable, &reach.drivable};
  std::array<RolloutLimits, 2> limits{pruned, drivable};
  parallel_for(2, settings.workers, [&](std::size_t i) {
    *slots[i] = rollout_agent(
      ego.state, ego.body, schedule, limits[i], assumptions, settings.spec, settings.seed, key);
  });
  return reach;
}

namespace
{
struct LatticeKey
{
  std::int64_t v[6];
  friend bool operator==(const LatticeKey &, const LatticeKey &) = default;
};

struct LatticeHash
{
  std::size_t operator()(const LatticeKey & k) const
  {
    std::uint64_t h = 0;
    for (const std::int64_t x : k.v) {
      h = mix_seed(h ^ static_cast<std::uint64_t>(x));
    }
    return static_cast<std::size_t>(h);
  }
};

std::vector<ControlTarget> control_grid(const KinematicProfile & profile, int grid_n)
{
  std::vector<ControlTarget> grid;
  for (int i = 0; i < grid_n; ++i) {
    const double ua = grid_n == 1 ? 0.0 : -1.0 + 2.0 * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double ub = grid_n == 1 ? 0.0 : -1.0 + 2.0 * j / (grid_n - 1);
      double a = ua >= 0.0 ? ua * profile.accel_max : -ua * profile.accel_min;
      double b = ub * profile.lateral_accel_max;
      const double r = ellipse_norm(a, b, profile);
      if (r > 1.0) {
        a /= r;
        b /= r;
      }
      const ControlTarget c{a, b};
      if (std::find(grid.begin(), grid.end(), c) == grid.end()) {
        grid.push_back(c);
      }
    }
  }
  return grid;
}
}  // namespace

ReachableSequence dense_oracle_rollout(
  const KinematicState & initial, const AgentBody & body, const ProfileSchedule & schedule,
  const GroundRaster * permitted, const AssumptionSet & assumptions, const RasterSpec & spec,
  int grid_n)
{
  if (assumptions.horizon > 1.5 + 1e-9) {
    throw std::invalid_argument("dense oracle refuses horizons above 1.5 s");
  }
  if (grid_n < 1 || grid_n > 5) {
    throw std::invalid_argument("dense oracle grid must have 1..5 points per axis");
  }
  const double dt = assumptions.time_step;
  const double q_pos = spec.resolution / 4.0;
  constexpr double q_yaw = 0.005;
  constexpr double q_dyn = 0.05;
  auto key_of = [&](const KinematicState & s) {
    return LatticeKey{{
      std::llround(s.x / q_pos), std::llround(s.y / q_pos), std::llround(s.yaw / q_yaw),
      std::llround(s.speed / q_dyn), std::llround(s.accel_long / q_dyn), std::llround(s.accel_lat / q_dyn)}};
  };

  ReachableSequence out;
  std::vector<CellSpan> spans;
  ReachablePerTau first{0, GroundRaster(spec), {}};
  box_spans(spec, {initial.x, initial.y}, initial.yaw, body.length, body.width, assumptions.padding, spans);
  first.occupied_mask.fill(spans);
  out.push_back(std::move(first));

  std::vector<KinematicState> frontier{initial};
  for (int k = 0; k < assumptions.steps(); ++k) {
    const KinematicProfile & profile = schedule.at_step(k, dt);
    const std::vector<ControlTarget> grid = control_grid(profile, grid_n);
    ReachablePerTau layer{k + 1, GroundRaster(spec), {}};
    std::unordered_set<LatticeKey, LatticeHash> seen;
    std::vector<KinematicState> next;
    for (const KinematicState & s : frontier) {
      for (const ControlTarget & u : grid) {
        const KinematicState n = step(s, u, profile, body, dt);
        if (!seen.insert(key_of(n)).second) {
          continue;
        }
        spans.clear();
        box_spans(spec, {n.x, n.y}, n.yaw, body.length, body.width, assumptions.padding, spans);
        if (permitted != nullptr && !permitted->all_set(spans)) {
          continue;
        }
        layer.occupied_mask.fill(spans);
        next.push_back(n);
      }
    }
    frontier = std::move(next);
    out.push_back(std::move(layer));
  }
  return out;
}

}  // namespace fsm
