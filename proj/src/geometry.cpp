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

#include "fsm/geometry.hpp"

#include <algorithm>

namespace fsm
{

std::array<Vec2, 4> box_corners(Vec2 center, double yaw, double length, double width)
{
  const Vec2 fwd{std::cos(yaw), std::sin(yaw)};
  const Vec2 left{-fwd.y, fwd.x};
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  return {
    center - hl * fwd - hw * left, center + hl * fwd - hw * left,
    center + hl * fwd + hw * left, center - hl * fwd + hw * left};
}

double project_onto_segment(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) {
    return 0.0;
  }
  return std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b)
{
  const double t = project_onto_segment(p, a, b);
  return norm(p - (a + t * (b - a)));
}

double distance_point_polyline(Vec2 p, std::span<const Vec2> polyline)
{
  if (polyline.empty()) {
    return INFINITY;
  }
  if (polyline.size() == 1) {
    return norm(p - polyline.front());
  }
  double best = INFINITY;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, distance_point_segment(p, polyline[i], polyline[i + 1]));
  }
  return best;
}

double signed_area(std::span<const Vec2> ring)
{
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    twice += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * twice;
}

namespace
{
int orientation(Vec2 a, Vec2 b, Vec2 c)
{
  const double v = cross(b - a, c - a);
  constexpr double eps = 1e-12;
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p)
{
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}
}  // namespace

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_self_intersecting(std::span<const Vec2> ring)
{
  const std::size_t n = ring.size();
  if (n < 4) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a1 = ring[i];
    const Vec2 a2 = ring[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) {
        continue;  // closing edge shares a vertex with the first edge
      }
      if (segments_intersect(a1, a2, ring[j], ring[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> ring)
{
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) {
        inside = !inside;
      }
    }
  }
  return inside;
}

Polygon convex_hull(std::vector<Vec2> points)
{
  std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) {
    return points;
  }
  Polygon hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2 & p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace fsm
