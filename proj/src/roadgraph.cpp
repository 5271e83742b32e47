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

#include "fsm/roadgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

namespace fsm
{

namespace
{
constexpr double kHeadingTol = 1e-3;

std::vector<Vec2> centerline_xy(const Lane & lane)
{
  std::vector<Vec2> pts;
  pts.reserve(lane.centerline.size());
  for (const auto & p : lane.centerline) {
    pts.push_back(p.xy());
  }
  return pts;
}

double segment_direction(Vec2 a, Vec2 b) { return std::atan2(b.y - a.y, b.x - a.x); }

// Angular distance from `angle` to the arc running from `from` to `to` the short way.
double distance_to_arc(double angle, double from, double to)
{
  const double span = wrap_angle(to - from);
  const double rel = wrap_angle(angle - from);
  if (span >= 0.0 ? (rel >= 0.0 && rel <= span) : (rel <= 0.0 && rel >= span)) {
    return 0.0;
  }
  return std::min(std::abs(rel), std::abs(wrap_angle(angle - to)));
}

void validate_lane(const Lane & lane)
{
  const std::string who = "lane '" + lane.id + "': ";
  if (lane.id.empty()) {
    throw RoadgraphError("lane with empty id");
  }
  if (lane.centerline.size() < 2) {
    throw RoadgraphError(who + "centerline needs at least 2 points");
  }
  if (lane.left_boundary.size() < 2 || lane.right_boundary.size() < 2) {
    throw RoadgraphError(who + "boundaries need at least 2 points");
  }
  const auto & cl = lane.centerline;
  const std::size_t n = cl.size();
  std::vector<double> dirs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (norm(cl[i + 1].xy() - cl[i].xy()) <= 0.0) {
      throw RoadgraphError(who + "repeated centerline point " + std::to_string(i + 1));
    }
    dirs.push_back(segment_direction(cl[i].xy(), cl[i + 1].xy()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    if (i == 0 || i == n - 1) {
      // end tangents may lead or trail the chord by up to the adjacent turn
      const double chord = i == 0 ? dirs.front() : dirs.back();
      const double turn =
        dirs.size() > 1 ? std::abs(wrap_angle(i == 0 ? dirs[1] - dirs[0] : dirs[dirs.size() - 1] - dirs[dirs.size() - 2]))
                        : 0.0;
      off = std::max(0.0, std::abs(wrap_angle(cl[i].heading - chord)) - turn);
    } else {
      off = distance_to_arc(cl[i].heading, dirs[i - 1], dirs[i]);
    }
    if (off > kHeadingTol) {
      throw RoadgraphError(who + "heading of centerline point " + std::to_string(i) +
                           " disagrees with the centerline direction");
    }
  }
  const Vec2 travel = cl.back().xy() - cl.front().xy();
  for (const auto * boundary : {&lane.left_boundary, &lane.right_boundary}) {
    if (dot(boundary->back() - boundary->front(), travel) <= 0.0) {
      throw RoadgraphError(who + "boundary traversal direction opposes the centerline");
    }
  }
  const Vec2 fwd{std::cos(cl.front().heading), std::sin(cl.front().heading)};
  if (cross(fwd, lane.left_boundary.front() - cl.front().xy()) <= 0.0 ||
      cross(fwd, lane.right_boundary.front() - cl.front().xy()) >= 0.0) {
    throw RoadgraphError(who + "left/right boundaries are swapped");
  }
  const Polygon ring = lane.polygon();
  if (is_self_intersecting(ring)) {
    throw RoadgraphError(who + "lane polygon is self-intersecting");
  }
}

bool inside_or_on(Vec2 p, const Polygon & ring)
{
  if (point_in_polygon(p, ring)) {
    return true;
  }
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (distance_point_segment(p, ring[i], ring[(i + 1) % ring.size()]) < 1e-6) {
      return true;
    }
  }
  return false;
}
}  // namespace

Polygon Lane::polygon() const
{
  Polygon ring(left_boundary.begin(), left_boundary.end());
  ring.insert(ring.end(), right_boundary.rbegin(), right_boundary.rend());
  return ring;
}

double Lane::length() const
{
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < centerline.size(); ++i) {
    total += norm(centerline[i + 1].xy() - centerline[i].xy());
  }
  return total;
}

LaneSample nearest_centerline_sample(const Lane & lane, Vec2 point)
{
  LaneSample best{lane.centerline.front().heading, lane.centerline.front().z, INFINITY};
  for (std::size_t i = 0; i + 1 < lane.centerline.size(); ++i) {
    const auto & a = lane.centerline[i];
    const auto & b = lane.centerline[i + 1];
    const double t = project_onto_segment(point, a.xy(), b.xy());
    const Vec2 q = a.xy() + t * (b.xy() - a.xy());
    const double d = norm(point - q);
    if (d < best.distance) {
      best.distance = d;
      best.heading = wrap_angle(a.heading + t * wrap_angle(b.heading - a.heading));
      best.z = a.z + t * (b.z - a.z);
    }
  }
  return best;
}

Roadgraph::Roadgraph(std::vector<Lane> lanes, Polygon road_polygon)
: lanes_(std::move(lanes)), road_polygon_(std::move(road_polygon))
{
  if (road_polygon_.size() < 3) {
    throw RoadgraphError("road polygon needs at least 3 vertices");
  }
  if (is_self_intersecting(road_polygon_)) {
    throw RoadgraphError("road polygon is self-intersecting");
  }
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    validate_lane(lanes_[i]);
    if (!index_.emplace(lanes_[i].id, i).second) {
      throw RoadgraphError("duplicate lane id '" + lanes_[i].id + "'");
    }
  }
  for (const Lane & lane : lanes_) {
    for (const std::string & succ : lane.successor_ids) {
      if (!index_.contains(succ)) {
        throw RoadgraphError("lane '" + lane.id + "': dangling successor id '" + succ + "'");
      }
    }
    for (const Vec2 & p : lane.polygon()) {
      if (!inside_or_on(p, road_polygon_)) {
        throw RoadgraphError("lane '" + lane.id + "' extends outside the road polygon");
      }
    }
  }
}

const Lane * Roadgraph::find(const std::string & id) const
{
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &lanes_[it->second];
}

Vec2 Footprint::center() const
{
  Vec2 sum{};
  for (const Circle & c : circles) {
    sum = sum + c.center;
  }
  return circles.empty() ? sum : (1.0 / static_cast<double>(circles.size())) * sum;
}

Footprint agent_footprint(const AgentBody & body, const KinematicState & state)
{
  const int count = std::max(1, static_cast<int>(std::ceil(body.length / body.width - 1e-9)));
  const double radius = body.width / std::numbers::sqrt2;
  const double spacing = body.length / count;
  const Vec2 fwd{std::cos(state.yaw), std::sin(state.yaw)};
  Footprint fp;
  fp.circles.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double offset = -0.5 * body.length + (i + 0.5) * spacing;
    fp.circles.push_back({Vec2{state.x, state.y} + offset * fwd, radius});
  }
  return fp;
}

LaneSet seed_lanes(
  const Footprint & footprint, double agent_yaw, double agent_z, const Roadgraph & graph,
  double align_eps, double z_max)
{
  LaneSet seed;
  const Vec2 center = footprint.center();
  for (const Lane & lane : graph.lanes()) {
    const std::vector<Vec2> cl = centerline_xy(lane);
    const bool covered = std::any_of(
      footprint.circles.begin(), footprint.circles.end(), [&](const Footprint::Circle & c) {
        return distance_point_polyline(c.center, cl) <= c.radius ||
               distance_point_polyline(c.center, lane.left_boundary) <= c.radius ||
               distance_point_polyline(c.center, lane.right_boundary) <= c.radius;
      });
    if (!covered) {
      continue;
    }
    const LaneSample sample = nearest_centerline_sample(lane, center);
    if (!(std::abs(agent_z - sample.z) < z_max)) {
      continue;
    }
    const double misalignment = std::abs(wrap_angle(agent_yaw - sample.heading));
    if (misalignment > std::numbers::pi - align_eps) {
      return {};
    }
    if (misalignment < align_eps) {
      seed.insert(lane.id);
    }
  }
  return seed;
}

LaneSet available_lanes(const LaneSet & seed, const Roadgraph & graph, double max_depth_m)
{
  // Dijkstra over lane start distances; seed lanes start at zero.
  std::map<std::string, double> start_distance;
  using Entry = std::pair<double, std::string>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  for (const std::string & id : seed) {
    if (graph.find(id) != nullptr) {
      start_distance[id] = 0.0;
      frontier.push({0.0, id});
    }
  }
  while (!frontier.empty()) {
    const auto [dist, id] = frontier.top();
    frontier.pop();
    if (dist > start_distance[id]) {
      continue;
    }
    const Lane * lane = graph.find(id);
    const double next = dist + lane->length();
    if (next > max_depth_m) {
      continue;
    }
    for (const std::string & succ : lane->successor_ids) {
      const auto it = start_distance.find(succ);
      if (it == start_distance.end() || next < it->second) {
        start_distance[succ] = next;
        frontier.push({next, succ});
      }
    }
  }
  LaneSet out;
  for (const auto & [id, dist] : start_distance) {
    out.insert(id);
  }
  return out;
}

GroundRaster permitted_mask(
  const LaneRestriction & restriction, const Roadgraph & graph, const RasterSpec & spec)
{
  if (restriction.unrestricted) {
    return rasterize_polygon(graph.road_polygon(), spec);
  }
  GroundRaster mask(spec);
  std::vector<CellSpan> spans;
  for (const std::string & id : restriction.lanes) {
    const Lane * lane = graph.find(id);
    if (lane == nullptr) {
      throw RoadgraphError("unknown lane '" + id + "'");
    }
    spans.clear();
    const Polygon ring = lane->polygon();
    polygon_spans(spec, ring, spans);
    mask.fill(spans);
  }
  return mask;
}

}  // namespace fsm
