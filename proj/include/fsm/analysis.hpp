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

#ifndef FSM__ANALYSIS_HPP_
#define FSM__ANALYSIS_HPP_

#include "fsm/config.hpp"
#include "fsm/metrics.hpp"
#include "fsm/scenario.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace fsm
{

/// Everything computed for one real time t.
struct FrameArtifacts
{
  std::size_t frame_index{0};
  RasterSpec spec;
  FrameAgent ego;
  std::vector<FrameAgent> orus;
  std::vector<OccupiedArea> oru_areas;
  EgoReach ego_reach;
  FrameResult result;
  std::vector<std::string> diagnostics;
};

struct AnalysisResult
{
  std::string scenario_name;
  RasterSpec spec;
  std::vector<FrameResult> frames;
  /// Per-frame diagnostics, indexed like `frames`.
  std::vector<std::vector<std::string>> diagnostics;
  ScenarioMetrics metrics;
};

/// Called once per frame, possibly from several threads at once.
using FrameCallback = std::function<void(const FrameArtifacts &)>;

/// One raster for the whole scenario: the road polygon and every observed
/// agent position, grown by the configured margin.
RasterSpec scenario_raster_spec(const Scenario & scenario, const AssumptionSet & assumptions);

/// Agents of one timeline entry, ego first.
FrameAgent frame_agent(const Scenario & scenario, std::size_t frame, std::size_t agent);

FrameArtifacts analyze_frame(
  const Scenario & scenario, std::size_t frame, const RunConfig & config, const RasterSpec & spec);

/// Runs every frame (in parallel across config.workers) and reduces the
/// results in timeline order.
AnalysisResult analyze(
  const Scenario & scenario, const RunConfig & config, const FrameCallback & on_frame = {});

enum class SweepParam { replanning_delay, accel_min, roadgraph };

/// Accepts "replanning_delay", "a_min" and "roadgraph"; throws ConfigError.
SweepParam parse_sweep_param(const std::string & name);

/// Copy of `base` with one sweep value applied to the ego. Numeric values set
/// the ego's replanning delay or responder braking limit; roadgraph values
/// are "unrestricted" or "in_lane".
RunConfig apply_sweep_value(const RunConfig & base, SweepParam param, const std::string & value);

/// Metrics report. Independent of the worker count.
nlohmann::ordered_json metrics_report(const AnalysisResult & result, const RunConfig & config);

}  // namespace fsm

#endif  // FSM__ANALYSIS_HPP_
