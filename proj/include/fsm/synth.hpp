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

#ifndef FSM__SYNTH_HPP_
#define FSM__SYNTH_HPP_

#include "fsm/scenario.hpp"

#include <string>

namespace fsm
{

/// Straight lane of constant heading between two centerline points.
Lane straight_lane(
  const std::string & id, Vec2 start, Vec2 end, double width,
  std::vector<std::string> successors = {});

struct TailgateParams
{
  double gap_s{0.5};
  double speed{30.0};
  int lanes{3};
  double duration{6.0};
  double cadence{0.1};
  /// Amplitude of a slow sinusoidal variation of the ego-lead spacing over
  /// one scenario duration.
  double spacing_wobble{1.0};
  double lane_width{3.5};
  double shoulder_width{2.0};
};

/// Eastbound freeway of 100 m lane segments "L<lane>s<segment>". Lane 0 is
/// the leftmost lane, next to a paved shoulder, and holds the ego and
/// the lead; the ego's front bumper trails the lead's rear bumper by
/// gap_s * speed. Lane 1 carries a vehicle 20 m behind the lead (beside a
/// 0.5 s tailgater) and lane 2 one 10 m ahead of it.
Scenario synth_tailgate(const TailgateParams & params);
Scenario synth_tailgate(double gap_s, double speed, int lanes);

struct SdliParams
{
  double cut_in_time{2.0};
  double lateral_rate{1.0};
  double speed{25.0};
  double initial_gap{5.0};
  double lane_width{3.5};
  double brake_delay{1.0};
  double brake_accel{-4.0};
  double brake_jerk{4.0};
  double brake_hold{0.75};
  double duration{10.0};
  double cadence{0.1};
};

/// Two-lane eastbound road. The initiator starts in the right lane "R"
/// slightly ahead of the ego in lane "E" and moves laterally into lane "E"
/// at `lateral_rate` from `cut_in_time`. The ego then brakes along a
/// jerk-limited script.
Scenario synth_sdli(const SdliParams & params);
Scenario synth_sdli(double cut_in_time, double lateral_rate);

/// Ego longitudinal acceleration of the SDLI script at time t.
double sdli_ego_accel(const SdliParams & params, double t);

struct ScpTraffic
{
  bool eastbound{true};
  double eastbound_x{-45.0};
  double eastbound_speed{10.0};
  bool westbound{true};
  double westbound_x{0.0};
  double westbound_speed{10.0};
  double duration{0.0};
  double cadence{0.1};
  double lane_width{3.5};
  /// Paved strip beyond lane A.
  double far_shoulder{2.5};
  /// Distance from the ego's front bumper back to the stop line.
  double stop_offset{1.0};
  /// Size of the straight curb returns cut into both junction corners.
  double curb_return{6.0};
};

/// Ego stopped at a stop line on a side road meeting a five-lane east-west
/// road. Lanes from the ego side are "D" and "C" (eastbound), the shared
/// middle lane ("M_east" and "M_west" over the same strip), then "B" and
/// "A" (westbound). Cross traffic drives in lanes C and B.
Scenario synth_scp(const ScpTraffic & traffic);

}  // namespace fsm

#endif  // FSM__SYNTH_HPP_
