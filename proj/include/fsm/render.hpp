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

#ifndef FSM__RENDER_HPP_
#define FSM__RENDER_HPP_

#include "fsm/analysis.hpp"

#include <filesystem>
#include <string>

namespace fsm
{

struct RenderStyle
{
  double pixels_per_meter{4.0};
  /// Free space kept around the drawn content, in metres.
  double margin_m{10.0};
  /// Number of colour shades used for the tau progression.
  int tau_shades{5};
};

/// SVG of one frame: prohibited ground gray, the ego's permitted area white,
/// lane boundaries, ORU occupied areas in orange and the ego's drivable area
/// in blue (darker for earlier tau), the drivable area at the horizon in
/// green when it exists, agent boxes and a legend.
std::string render_frame_svg(
  const FrameArtifacts & frame, const Roadgraph & graph, const RenderStyle & style = {});

void write_frame_svg(
  const FrameArtifacts & frame, const Roadgraph & graph, const std::filesystem::path & path,
  const RenderStyle & style = {});

}  // namespace fsm

#endif  // FSM__RENDER_HPP_
