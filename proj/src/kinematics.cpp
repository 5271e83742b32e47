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

#include "fsm/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsm
{

void KinematicProfile::validate() const
{
  auto fail = [](const std::string & what) { throw std::invalid_argument("kinematic profile: " + what); };
  if (!(accel_min < 0.0)) fail("accel_min must be negative");
  if (!(accel_max > 0.0)) fail("accel_max must be positive");
  if (!(lateral_accel_max > 0.0)) fail("lateral_accel_max must be positive");
  if (!(jerk_min > 0.0) || !(jerk_max > 0.0)) fail("jerk limits must be positive magnitudes");
  if (!(lateral_jerk_max > 0.0)) fail("lateral_jerk_max must be positive");
  if (!(speed_min >= 0.0) || !(speed_min < speed_max)) fail("speed range must satisfy 0 <= min < max");
  if (!(replanning_delay >= 0.0)) fail("replanning_delay must be non-negative");
}

KinematicProfile light_vehicle_normal_profile()
{
  return {0.0, 40.0, -2.2, 2.5, 1.8, 1.8, 1.3, 0.8, 1.0};
}

KinematicProfile light_vehicle_surprising_profile()
{
  return {0.0, 40.0, -7.3, 6.9, 6.3, 6.0, 5.3, 4.5, 0.0};
}

void AgentBody::validate() const
{
  if (!(width > 0.0) || !(length >= width)) {
    throw std::invalid_argument("agent body: need length >= width > 0");
  }
  if (model == ModelKind::bicycle && !(wheelbase > 0.0 && wheelbase <= length)) {
    throw std::invalid_argument("agent body: bicycle wheelbase must lie in (0, length]");
  }
  if (model == ModelKind::point_mass && !(max_yaw_rate > 0.0)) {
    throw std::invalid_argument("agent body: point-mass max_yaw_rate must be positive");
  }
}

double ellipse_norm(double accel_long, double accel_lat, const KinematicProfile & profile)
{
  const double semi_long = accel_long > 0.0 ? profile.accel_max : -profile.accel_min;
  return std::hypot(accel_long / semi_long, accel_lat / profile.lateral_accel_max);
}

Acceleration clip_acceleration(
  const KinematicState & prev, const ControlTarget & target, const KinematicProfile & profile,
  double dt)
{
  const double a_prev = std::clamp(prev.accel_long, profile.accel_min, profile.accel_max);
  const double b_prev =
    std::clamp(prev.accel_lat, -profile.lateral_accel_max, profile.lateral_accel_max);

  const double a_lo = std::max(profile.accel_min, a_prev - dt * profile.jerk_min);
  const double a_hi = std::min(profile.accel_max, a_prev + dt * profile.jerk_max);
  const double b_lo = std::max(-profile.lateral_accel_max, b_prev - dt * profile.lateral_jerk_max);
  const double b_hi = std::min(profile.lateral_accel_max, b_prev + dt * profile.lateral_jerk_max);

  Acceleration out{
    std::clamp(target.accel_long, a_lo, a_hi), std::clamp(target.accel_lat, b_lo, b_hi)};

  const double radius = ellipse_norm(out.accel_long, out.accel_lat, profile);
  if (radius <= 1.0) {
    return out;
  }
  const Acceleration radial{out.accel_long / radius, out.accel_lat / radius};
  const bool in_window = radial.accel_long >= a_lo && radial.accel_long <= a_hi &&
                         radial.accel_lat >= b_lo && radial.accel_lat <= b_hi;
  if (in_window || ellipse_norm(a_prev, b_prev, profile) > 1.0 + 1e-9) {
    return radial;
  }
  // boundary point on the segment from the previous acceleration, which lies
  // inside both the window and the ellipse
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double a = a_prev + mid * (out.accel_long - a_prev);
    const double b = b_prev + mid * (out.accel_lat - b_prev);
    (ellipse_norm(a, b, profile) <= 1.0 ? lo : hi) = mid;
  }
  return {a_prev + lo * (out.accel_long - a_prev), b_prev + lo * (out.accel_lat - b_prev)};
}

KinematicState step(
  const KinematicState & state, const ControlTarget & control, const KinematicProfile & profile,
  const AgentBody & body, double dt)
{
  const Acceleration accel = clip_acceleration(state, control, profile, dt);

  KinematicState next;
  next.accel_long = accel.accel_long;
  next.accel_lat = accel.accel_lat;

  const double raw_speed = state.speed + dt * accel.accel_long;
  next.speed = std::clamp(raw_speed, profile.speed_min, profile.speed_max);
  if (raw_speed < profile.speed_min && profile.speed_min == 0.0) {
    // a stopped agent holds no residual braking into the next step
    next.accel_long = std::max(next.accel_long, 0.0);
  }

  double yaw_rate = 0.0;
  if (body.model == ModelKind::bicycle) {
    if (state.speed >= kStationarySpeed) {
      const double max_rate = state.speed / body.wheelbase;
      yaw_rate = std::clamp(accel.accel_lat / state.speed, -max_rate, max_rate);
    }
  } else {
    yaw_rate = std::clamp(
      accel.accel_lat / std::max(state.speed, kStationarySpeed), -body.max_yaw_rate,
      body.max_yaw_rate);
  }

  next.yaw = state.yaw + dt * yaw_rate;
  next.x = state.x + dt * state.speed * std::cos(state.yaw);
  next.y = state.y + dt * state.speed * std::sin(state.yaw);
  return next;
}

std::vector<ControlTarget> sample_perimeter_controls(const KinematicProfile & profile, int n_per)
{
  if (n_per < 4) {
    throw std::invalid_argument("perimeter sampling needs at least 4 controls");
  }
  std::vector<ControlTarget> controls;
  controls.reserve(static_cast<std::size_t>(n_per));
  for (int i = 0; i < n_per; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n_per;
    const double c = std::cos(angle);
    const double semi_long = c > 0.0 ? profile.accel_max : -profile.accel_min;
    controls.push_back({semi_long * c, profile.lateral_accel_max * std::sin(angle)});
  }
  return controls;
}

std::uint64_t mix_seed(std::uint64_t value)
{
  // splitmix64 finaliser
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t hash_id(std::string_view id)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t particle_seed(std::uint64_t global_seed, std::uint64_t agent_key, std::uint64_t particle)
{
  return mix_seed(mix_seed(mix_seed(global_seed) ^ agent_key) ^ particle);
}

ControlTarget sample_interior_control(const KinematicProfile & profile, RandomStream & rng)
{
  while (true) {
    const double a = rng.uniform(profile.accel_min, profile.accel_max);
    const double b = rng.uniform(-profile.lateral_accel_max, profile.lateral_accel_max);
    if (ellipse_norm(a, b, profile) < 1.0) {
      return {a, b};
    }
  }
}

std::vector<ControlTarget> sample_interior_controls(
  const KinematicProfile & profile, int n_int, RandomStream & rng)
{
  std::vector<ControlTarget> controls;
  controls.reserve(static_cast<std::size_t>(std::max(n_int, 0)));
  for (int i = 0; i < n_int; ++i) {
    controls.push_back(sample_interior_control(profile, rng));
  }
  return controls;
}

}  // namespace fsm
