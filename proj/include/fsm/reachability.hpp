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

#ifndef FSM__REACHABILITY_HPP_
#define FSM__REACHABILITY_HPP_

#include "fsm/kinematics.hpp"
#include "fsm/raster.hpp"
#include "fsm/roadgraph.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fsm
{

struct ProfilePair
{
  KinematicProfile normal;
  KinematicProfile surprising;

  friend bool operator==(const ProfilePair &, const ProfilePair &) = default;
};

/// Kinematic limits per road-user type plus the model's non-kinematic knobs.
struct AssumptionSet
{
  std::map<std::string, ProfilePair> profiles;
  double time_step{0.1};
  double horizon{4.0};
  double lane_alignment{0.5235987755982988};  // 30 degrees
  double raster_resolution{0.3};
  int interior_samples{100};
  int perimeter_samples{32};
  double z_max{3.0};
  double padding{0.0};
  double raster_margin{10.0};

  /// Light vehicle, pedestrian and cyclist profiles with default knobs.
  static AssumptionSet defaults();

  /// Throws std::invalid_argument on the first violated constraint.
  void validate() const;

  int steps() const;
  const ProfilePair & profiles_for(const std::string & road_user_type) const;
};

/// Profile in force for each rollout step: `before` for steps starting
/// earlier than `switch_time`, `after` from then on.
struct ProfileSchedule
{
  KinematicProfile before;
  KinematicProfile after;
  double switch_time{0.0};

  static ProfileSchedule constant(const KinematicProfile & profile) { return {profile, profile, 0.0}; }
  /// Normal limits until the replanning delay elapses, responder limits after.
  static ProfileSchedule responder(const ProfilePair & pair);

  const KinematicProfile & at_step(int step, double dt) const;
};

enum class ParticleKind { perimeter, interior };

/// One trajectory sample. Death is permanent.
struct Particle
{
  KinematicState state;
  ControlTarget control;
  ParticleKind kind{ParticleKind::perimeter};
  bool alive{true};
  double birth_control_angle{0.0};
  int index{0};
};

struct ReachablePerTau
{
  int tau_index{0};
  GroundRaster occupied_mask;
  std::vector<Particle> alive_particles;
};

using ReachableSequence = std::vector<ReachablePerTau>;

/// What a rollout may touch. Null `permitted` disables roadgraph pruning;
/// `obstacles`, when given, holds one mask per tau index.
struct RolloutLimits
{
  const GroundRaster * permitted{nullptr};
  std::span<const GroundRaster> obstacles{};
};

/// Sampling-based rollout of one agent over tau = 0 .. H. Perimeter
/// particles hold a fixed direction on the boundary of whichever friction
/// ellipse is in force; interior particles redraw a control every step from
/// their own stream seeded by particle_seed(seed, stream_key, i).
ReachableSequence rollout_agent(
  const KinematicState & initial, const AgentBody & body, const ProfileSchedule & schedule,
  const RolloutLimits & limits, const AssumptionSet & assumptions, const RasterSpec & spec,
  std::uint64_t seed, std::uint64_t stream_key);

/// An agent observed in one frame.
struct FrameAgent
{
  std::string id;
  std::string type{"vehicle"};
  AgentBody body;
  KinematicState state;
  double z{0.0};
};

struct RolloutSettings
{
  RasterSpec spec;
  std::uint64_t seed{0};
  std::uint64_t frame_key{0};
  int workers{1};
};

/// Stream key of an agent's particles in a given frame.
std::uint64_t agent_stream_key(const std::string & agent_id, std::uint64_t frame_key);

/// Lane restriction from the footprint rules: seed lanes, then their
/// downstream closure up to s_max * H + length. Empty seed means unrestricted.
LaneRestriction lane_restriction_for(
  const FrameAgent & agent, const Roadgraph & graph, const AssumptionSet & assumptions);

struct OccupiedArea
{
  std::string agent_id;
  LaneRestriction restriction;
  /// False when the agent's current footprint does not fit even the road
  /// polygon and its rollout runs without roadgraph pruning.
  bool roadgraph_pruned{true};
  GroundRaster permitted;
  ReachableSequence reachable;
  std::vector<std::string> diagnostics;
};

/// Independent initiator-profile rollouts of every other road user.
std::vector<OccupiedArea> compute_occupied_areas(
  std::span<const FrameAgent> orus, const Roadgraph & graph, const AssumptionSet & assumptions,
  const RolloutSettings & settings);

/// Per-tau union of every ORU's occupied mask.
std::vector<GroundRaster> union_occupied(
  std::span<const OccupiedArea> areas, const AssumptionSet & assumptions, const RasterSpec & spec);

enum class EgoLaneRestriction { unrestricted, in_lane };

struct EgoReach
{
  LaneRestriction restriction;
  GroundRaster permitted;
  /// Roadgraph-pruned reachable set without ORU pruning.
  ReachableSequence reachable;
  /// Drivable area: roadgraph-pruned and free of ORU occupied areas.
  ReachableSequence drivable;
};

/// Ego rollout with normal limits before the replanning delay and responder
/// limits after, pruned by the ego's permitted area and the ORU occupied
/// areas at the same tau.
EgoReach compute_drivable_area(
  const FrameAgent & ego, std::span<const OccupiedArea> oru_areas, const Roadgraph & graph,
  const AssumptionSet & assumptions, EgoLaneRestriction lane_mode, const RolloutSettings & settings);

/// Exhaustive reference rollout over a grid_n x grid_n control grid,
/// deduplicated on a coarse state lattice. Refuses horizons above 1.5 s and
/// grids above 5 per axis with std::invalid_argument.
ReachableSequence dense_oracle_rollout(
  const KinematicState & initial, const AgentBody & body, const ProfileSchedule & schedule,
  const GroundRaster * permitted, const AssumptionSet & assumptions, const RasterSpec & spec,
  int grid_n);

}  // namespace fsm

#endif  // FSM__REACHABILITY_HPP_
