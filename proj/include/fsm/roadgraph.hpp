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

#ifndef FSM__ROADGRAPH_HPP_
#define FSM__ROADGRAPH_HPP_

#include "fsm/geometry.hpp"
#include "fsm/kinematics.hpp"
#include "fsm/raster.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsm
{

class RoadgraphError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct CenterlinePoint
{
  double x{0.0};
  double y{0.0};
  double z{0.0};
  double heading{0.0};

  Vec2 xy() const { return {x, y}; }
};

struct Lane
{
  std::string id;
  std::vector<CenterlinePoint> centerline;
  std::vector<Vec2> left_boundary;
  std::vector<Vec2> right_boundary;
  std::vector<std::string> successor_ids;

  /// Left boundary followed by the reversed right boundary.
  Polygon polygon() const;
  double length() const;
};

/// Lane heading and elevation at the centerline point nearest a query point.
struct LaneSample
{
  double heading{0.0};
  double z{0.0};
  double distance{0.0};
};

LaneSample nearest_centerline_sample(const Lane & lane, Vec2 point);

/// Immutable lane-level map. Construction validates geometry and links and
/// throws RoadgraphError naming the offending lane.
class Roadgraph
{
public:
  Roadgraph() = default;
  Roadgraph(std::vector<Lane> lanes, Polygon road_polygon);

  const std::vector<Lane> & lanes() const { return lanes_; }
  const Polygon & road_polygon() const { return road_polygon_; }
  const Lane * find(const std::string & id) const;

private:
  std::vector<Lane> lanes_;
  Polygon road_polygon_;
  std::map<std::string, std::size_t> index_;
};

struct Footprint
{
  struct Circle
  {
    Vec2 center;
    double radius;
  };
  std::vector<Circle> circles;

  Vec2 center() const;
};

/// ceil(length / width) circles of radius width / sqrt(2), evenly spaced on
/// the heading axis; their union covers the body rectangle.
Footprint agent_footprint(const AgentBody & body, const KinematicState & state);

using LaneSet = std::set<std::string>;

/// Lanes whose centerline or boundary meets the footprint, aligned with the
/// agent's yaw within `align_eps` and within `z_max` in elevation. Meeting an
/// anti-aligned lane yields the empty set, which callers read as
/// "no lane restriction".
LaneSet seed_lanes(
  const Footprint & footprint, double agent_yaw, double agent_z, const Roadgraph & graph,
  double align_eps, double z_max);

/// Successor closure of `seed`. A downstream lane is kept while the
/// centerline distance from the start of the seed to the lane's start is at
/// most `max_depth_m`.
LaneSet available_lanes(const LaneSet & seed, const Roadgraph & graph, double max_depth_m);

/// Permitted area for an agent: a lane set, or the whole road when
/// `unrestricted` is set.
struct LaneRestriction
{
  bool unrestricted{true};
  LaneSet lanes;

  static LaneRestriction none() { return {true, {}}; }
  static LaneRestriction to(LaneSet lanes) { return {false, std::move(lanes)}; }
};

GroundRaster permitted_mask(
  const LaneRestriction & restriction, const Roadgraph & graph, const RasterSpec & spec);

}  // namespace fsm

#endif  // FSM__ROADGRAPH_HPP_
