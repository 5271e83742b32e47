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

#ifndef FSM__KINEMATICS_HPP_
#define FSM__KINEMATICS_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fsm
{

/// One agent's planar motion sample. Yaw is counterclockwise from east;
/// lateral acceleration is positive to the left.
struct KinematicState
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
  double speed{0.0};
  double accel_long{0.0};
  double accel_lat{0.0};

  friend bool operator==(const KinematicState &, const KinematicState &) = default;
};

/// Limits for one behaviour regime. Jerk limits are stored as positive
/// magnitudes; `accel_min` is negative.
struct KinematicProfile
{
  double speed_min{0.0};
  double speed_max{40.0};
  double accel_min{-2.2};
  double accel_max{2.5};
  double lateral_accel_max{1.8};
  double jerk_min{1.8};
  double jerk_max{1.3};
  double lateral_jerk_max{0.8};
  double replanning_delay{1.0};

  /// Throws std::invalid_argument naming the first violated limit.
  void validate() const;

  friend bool operator==(const KinematicProfile &, const KinematicProfile &) = default;
};

KinematicProfile light_vehicle_normal_profile();
KinematicProfile light_vehicle_surprising_profile();

/// Acceleration setpoint inside the friction ellipse.
struct ControlTarget
{
  double accel_long{0.0};
  double accel_lat{0.0};

  friend bool operator==(const ControlTarget &, const ControlTarget &) = default;
};

struct Acceleration
{
  double accel_long{0.0};
  double accel_lat{0.0};
};

enum class ModelKind { bicycle, point_mass };

struct AgentBody
{
  double length{4.8};
  double width{2.0};
  double wheelbase{2.8};
  ModelKind model{ModelKind::bicycle};
  double max_yaw_rate{6.283185307179586};

  void validate() const;
};

/// Below this speed the bicycle model does not rotate.
inline constexpr double kStationarySpeed = 0.1;

/// Piecewise friction-ellipse radius of (a, b): uses accel_max as the
/// longitudinal semi-axis when a > 0 and |accel_min| otherwise. Values above
/// one lie outside the ellipse.
double ellipse_norm(double accel_long, double accel_lat, const KinematicProfile & profile);

/// Applies, in order: the longitudinal jerk window, the lateral bound and
/// lateral jerk window, and radial projection onto the friction ellipse.
/// When the radial point leaves the jerk windows and the previous
/// acceleration is feasible, the projection runs toward the previous
/// acceleration instead. The previous accelerations are first clipped to the
/// profile's absolute bounds, so an observed state outside the active limits
/// re-enters them.
Acceleration clip_acceleration(
  const KinematicState & prev, const ControlTarget & target, const KinematicProfile & profile,
  double dt);

/// One explicit-Euler step of the jerk-limited kinematic model.
KinematicState step(
  const KinematicState & state, const ControlTarget & control, const KinematicProfile & profile,
  const AgentBody & body, double dt);

/// `n_per` fixed controls evenly spaced in angle around the piecewise ellipse.
std::vector<ControlTarget> sample_perimeter_controls(const KinematicProfile & profile, int n_per);

/// Portable random stream: a 64-bit Mersenne Twister with a hand-rolled
/// uniform conversion, so draws are bit-identical across standard libraries.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t value);

/// Stable 64-bit hash of an identifier (FNV-1a).
std::uint64_t hash_id(std::string_view id);

/// Seed of the private stream for one rollout particle.
std::uint64_t particle_seed(std::uint64_t global_seed, std::uint64_t agent_key, std::uint64_t particle);

/// Uniform draw over the ellipse interior by rejection from its bounding box.
ControlTarget sample_interior_control(const KinematicProfile & profile, RandomStream & rng);

std::vector<ControlTarget> sample_interior_controls(
  const KinematicProfile & profile, int n_int, RandomStream & rng);

}  // namespace fsm

#endif  // FSM__KINEMATICS_HPP_
