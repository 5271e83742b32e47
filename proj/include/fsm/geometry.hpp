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

#ifndef FSM__GEOMETRY_HPP_
#define FSM__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace fsm
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

using Polygon = std::vector<Vec2>;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
  if (wrapped <= 0.0) {
    wrapped += two_pi;
  }
  return wrapped - std::numbers::pi;
}

/// Corners of an oriented rectangle, counterclockwise starting at rear-right.
std::array<Vec2, 4> box_corners(Vec2 center, double yaw, double length, double width);

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);

/// Closest point on segment [a, b] to p, as the segment parameter in [0, 1].
double project_onto_segment(Vec2 p, Vec2 a, Vec2 b);

double distance_point_polyline(Vec2 p, std::span<const Vec2> polyline);

/// Signed shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Vec2> ring);

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

/// True when two non-adjacent edges of the closed ring cross.
bool is_self_intersecting(std::span<const Vec2> ring);

bool point_in_polygon(Vec2 p, std::span<const Vec2> ring);

Polygon convex_hull(std::vector<Vec2> points);

}  // namespace fsm

#endif  // FSM__GEOMETRY_HPP_
