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

#include "fsm/metrics.hpp"

#include <cmath>
#include <string>

namespace fsm
{

FrameResult frame_metrics(const ReachableSequence & drivable, double horizon, double dt, double t)
{
  const int steps = static_cast<int>(std::lround(horizon / dt));
  if (static_cast<int>(drivable.size()) < steps + 1) {
    throw std::invalid_argument("drivable sequence must cover tau = 0 .. H");
  }
  FrameResult result;
  result.t = t;
  result.generalized_ttc = horizon + dt;
  result.ttc_is_sentinel = true;
  for (int k = 0; k <= steps; ++k) {
    const GroundRaster & mask = drivable[static_cast<std::size_t>(k)].occupied_mask;
    TauArea entry;
    entry.tau_index = k;
    entry.tau = k * dt;
    entry.area_m2 = mask.area_m2();
    entry.nonempty = entry.area_m2 > 0.0;
    if (!entry.nonempty && result.ttc_is_sentinel) {
      result.generalized_ttc = entry.tau;
      result.ttc_is_sentinel = false;
    }
    result.drivable_per_tau.push_back(entry);
  }
  result.frame_violation = !result.drivable_per_tau.back().nonempty;
  return result;
}

ScenarioMetrics scenario_metrics(
  std::span<const FrameResult> frames, double min_violation_s, double lag_s, double cadence)
{
  ScenarioMetrics metrics;
  if (frames.empty()) {
    return metrics;
  }
  if (frames.size() > 1) {
    const double mean = (frames.back().t - frames.front().t) / static_cast<double>(frames.size() - 1);
    if (!(mean > 0.0)) {
      throw MetricsError("frame times must be increasing");
    }
    for (std::size_t i = 1; i < frames.size(); ++i) {
      const double gap = frames[i].t - frames[i - 1].t;
      if (std::abs(gap - mean) > 0.01 * mean) {
        throw MetricsError(
          "irregular frame cadence at frame " + std::to_string(i) + " (t=" + std::to_string(frames[i].t) + ")");
      }
    }
    if (cadence <= 0.0) {
      cadence = mean;
    }
  }
  if (!(cadence > 0.0)) {
    throw MetricsError("cadence is required for a single-frame scenario");
  }
  metrics.cadence = cadence;

  std::size_t violating = 0;
  for (const FrameResult & f : frames) {
    violating += f.frame_violation ? 1 : 0;
  }
  metrics.frame_violation_rate = static_cast<double>(violating) / static_cast<double>(frames.size());

  for (std::size_t i = 0; i < frames.size();) {
    if (!frames[i].frame_violation) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < frames.size() && frames[j].frame_violation) {
      ++j;
    }
    const double duration = static_cast<double>(j - i) * cadence;
    if (duration >= min_violation_s - 1e-9) {
      metrics.fsm_violations.push_back({frames[i].t, frames[j - 1].t + cadence});
    }
    i = j;
  }

  metrics.lag_frames = static_cast<int>(std::lround(lag_s / cadence));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::vector<double> areas;
    for (const TauArea & a : frames[i].drivable_per_tau) {
      areas.push_back(a.area_m2);
    }
    metrics.area_series.push_back(std::move(areas));
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto & now = metrics.area_series[i];
    std::vector<std::optional<double>> deltas(now.size());
    if (metrics.lag_frames > 0 && i >= static_cast<std::size_t>(metrics.lag_frames)) {
      const auto & before = metrics.area_series[i - static_cast<std::size_t>(metrics.lag_frames)];
      for (std::size_t k = 0; k < now.size() && k < before.size(); ++k) {
        deltas[k] = now[k] - before[k];
      }
    }
    metrics.area_delta_series.push_back(std::move(deltas));
  }
  return metrics;
}

}  // namespace fsm
