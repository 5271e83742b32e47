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

#ifndef FSM__METRICS_HPP_
#define FSM__METRICS_HPP_

#include "fsm/reachability.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fsm
{

class MetricsError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TauArea
{
  int tau_index{0};
  double tau{0.0};
  bool nonempty{false};
  double area_m2{0.0};
};

struct FrameResult
{
  double t{0.0};
  std::vector<TauArea> drivable_per_tau;
  /// First tau with an empty drivable area, or H + dt when none is empty.
  double generalized_ttc{0.0};
  /// True when generalized_ttc is the H + dt sentinel.
  bool ttc_is_sentinel{true};
  /// Drivable area at tau = H is empty.
  bool frame_violation{false};
};

FrameResult frame_metrics(const ReachableSequence & drivable, double horizon, double dt, double t = 0.0);

struct ViolationInterval
{
  double t_start{0.0};
  /// Exclusive end: the last violating frame's time plus one cadence.
  double t_end{0.0};
};

struct ScenarioMetrics
{
  double frame_violation_rate{0.0};
  std::vector<ViolationInterval> fsm_violations;
  double cadence{0.0};
  int lag_frames{0};
  /// area_series[frame][tau_index] in m^2.
  std::vector<std::vector<double>> area_series;
  /// area(t, tau) - area(t - k, tau); empty optional while t - k precedes the
  /// first frame.
  std::vector<std::vector<std::optional<double>>> area_delta_series;
};

/// Rate, FSM violations (maximal runs of violating frames lasting at least
/// `min_violation_s`, each frame counting one cadence) and area deltas at a
/// lag of `lag_s`. Throws MetricsError when frame spacing jitters by more
/// than 1 % or times are not increasing. `cadence` overrides the spacing
/// inferred from the frames; it is required for single-frame input.
ScenarioMetrics scenario_metrics(
  std::span<const FrameResult> frames, double min_violation_s, double lag_s, double cadence = 0.0);

}  // namespace fsm

#endif  // FSM__METRICS_HPP_
