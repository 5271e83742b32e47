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

#include "fsm/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsm
{
namespace
{

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct View
{
  RasterSpec spec;
  int col0{0};
  int row0{0};
  int col1{0};
  int row1{0};
  double scale{4.0};

  double width_px() const { return (col1 - col0) * spec.resolution * scale; }
  double height_px() const { return (row1 - row0) * spec.resolution * scale; }
  double px(double x) const { return (x - spec.origin_x - col0 * spec.resolution) * scale; }
  double py(double y) const { return (spec.origin_y + row1 * spec.resolution - y) * scale; }
};

/// Per cell, the first tau index at which any of `seqs` occupies it, or -1.
std::vector<int> first_tau(const RasterSpec & spec, const std::vector<const ReachableSequence *> & seqs)
{
  std::vector<int> out(static_cast<std::size_t>(spec.width) * spec.height, -1);
  for (const auto * seq : seqs) {
    for (const auto & step : *seq) {
      const auto & mask = step.occupied_mask;
      const int wpr = mask.words_per_row();
      const auto words = mask.words();
      for (int row = 0; row < spec.height; ++row) {
        for (int w = 0; w < wpr; ++w) {
          std::uint64_t bits = words[static_cast<std::size_t>(row) * wpr + w];
          while (bits != 0) {
            const int b = __builtin_ctzll(bits);
            bits &= bits - 1;
            const int col = w * 64 + b;
            if (col >= spec.width) {
              continue;
            }
            int & cell = out[static_cast<std::size_t>(row) * spec.width + col];
            if (cell < 0 || step.tau_index < cell) {
              cell = step.tau_index;
            }
          }
        }
      }
    }
  }
  return out;
}

void extend(View & v, const std::vector<int> & cells, const RasterSpec & spec)
{
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      if (cells[static_cast<std::size_t>(row) * spec.width + col] >= 0) {
        v.col0 = std::min(v.col0, col);
        v.col1 = std::max(v.col1, col + 1);
        v.row0 = std::min(v.row0, row);
        v.row1 = std::max(v.row1, row + 1);
      }
    }
  }
}

void extend_point(View & v, Vec2 p)
{
  const int col = static_cast<int>(std::floor((p.x - v.spec.origin_x) / v.spec.resolution));
  const int row = static_cast<int>(std::floor((p.y - v.spec.origin_y) / v.spec.resolution));
  v.col0 = std::min(v.col0, col);
  v.col1 = std::max(v.col1, col + 1);
  v.row0 = std::min(v.row0, row);
  v.row1 = std::max(v.row1, row + 1);
}

/// One rect per horizontal run of cells sharing a shade.
void emit_runs(
  std::ostringstream & os, const View & v, const std::vector<int> & shade,
  const std::vector<std::string> & colours)
{
  const auto & s = v.spec;
  for (int row = v.row0; row < v.row1; ++row) {
    int col = v.col0;
    while (col < v.col1) {
      const int k = shade[static_cast<std::size_t>(row) * s.width + col];
      int end = col + 1;
      while (end < v.col1 && shade[static_cast<std::size_t>(row) * s.width + end] == k) {
        ++end;
      }
      if (k >= 0) {
        const double x0 = s.origin_x + col * s.resolution;
        const double y1 = s.origin_y + (row + 1) * s.resolution;
        os << "<rect x=\"" << fmt(v.px(x0)) << "\" y=\"" << fmt(v.py(y1)) << "\" width=\""
           << fmt((end - col) * s.resolution * v.scale) << "\" height=\""
           << fmt(s.resolution * v.scale) << "\" fill=\"" << colours.at(k) << "\"/>\n";
      }
      col = end;
    }
  }
}

std::vector<int> shades(const std::vector<int> & tau, int steps, int n_shades)
{
  std::vector<int> out(tau.size(), -1);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] >= 0) {
      out[i] = std::min(n_shades - 1, tau[i] * n_shades / std::max(1, steps + 1));
    }
  }
  return out;
}

std::vector<int> mask_cells(const GroundRaster & mask)
{
  const auto & s = mask.spec();
  std::vector<int> out(static_cast<std::size_t>(s.width) * s.height, -1);
  for (int row = 0; row < s.height; ++row) {
    for (int col = 0; col < s.width; ++col) {
      if (mask.test(col, row)) {
        out[static_cast<std::size_t>(row) * s.width + col] = 0;
      }
    }
  }
  return out;
}

std::string points_attr(const View & v, const std::vector<Vec2> & pts)
{
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      s += ' ';
    }
    s += fmt(v.px(pts[i].x)) + "," + fmt(v.py(pts[i].y));
  }
  return s;
}

std::vector<std::string> gradient(std::array<int, 3> dark, std::array<int, 3> light, int n)
{
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    const double f = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    char buf[8];
    std::snprintf(
      buf, sizeof(buf), "#%02x%02x%02x",
      static_cast<int>(std::lround(dark[0] + f * (light[0] - dark[0]))),
      static_cast<int>(std::lround(dark[1] + f * (light[1] - dark[1]))),
      static_cast<int>(std::lround(dark[2] + f * (light[2] - dark[2]))));
    out.emplace_back(buf);
  }
  return out;
}

}  // namespace

std::string render_frame_svg(
  const FrameArtifacts & frame, const Roadgraph & graph, const RenderStyle & style)
{
  const RasterSpec & spec = frame.spec;
  const int steps = frame.ego_reach.drivable.empty()
                      ? 0
                      : frame.ego_reach.drivable.back().tau_index;
  std::vector<const ReachableSequence *> oru_seqs;
  for (const auto & a : frame.oru_areas) {
    oru_seqs.push_back(&a.reachable);
  }
  const auto oru_tau = first_tau(spec, oru_seqs);
  const auto ego_tau = first_tau(spec, {&frame.ego_reach.drivable});
  const GroundRaster * at_horizon =
    frame.ego_reach.drivable.empty() ? nullptr : &frame.ego_reach.drivable.back().occupied_mask;

  View v;
  v.spec = spec;
  v.scale = style.pixels_per_meter;
  v.col0 = spec.width;
  v.row0 = spec.height;
  extend(v, ego_tau, spec);
  extend(v, oru_tau, spec);
  std::vector<std::pair<const FrameAgent *, bool>> agents{{&frame.ego, true}};
  for (const auto & o : frame.orus) {
    agents.emplace_back(&o, false);
  }
  for (const auto & [a, is_ego] : agents) {
    for (const auto & c : box_corners({a->state.x, a->state.y}, a->state.yaw, a->body.length, a->body.width)) {
      extend_point(v, c);
    }
  }
  const int pad = static_cast<int>(std::ceil(style.margin_m / spec.resolution));
  v.col0 = std::max(0, v.col0 - pad);
  v.row0 = std::max(0, v.row0 - pad);
  v.col1 = std::min(spec.width, v.col1 + pad);
  v.row1 = std::min(spec.height, v.row1 + pad);
  if (v.col1 <= v.col0 || v.row1 <= v.row0) {
    throw std::invalid_argument("render_frame_svg: nothing to draw inside the raster");
  }

  const double legend_h = 22.0;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(v.width_px()) << "\" height=\""
     << fmt(v.height_px() + legend_h) << "\" viewBox=\"0 0 " << fmt(v.width_px()) << " "
     << fmt(v.height_px() + legend_h) << "\">\n";
  os << "<title>frame " << frame.frame_index << " t=" << fmt(frame.result.t) << " s</title>\n";
  os << "<rect id=\"prohibited\" x=\"0\" y=\"0\" width=\"" << fmt(v.width_px()) << "\" height=\""
     << fmt(v.height_px()) << "\" fill=\"#9e9e9e\"/>\n";

  os << "<g id=\"permitted\">\n";
  emit_runs(os, v, mask_cells(frame.ego_reach.permitted), {"#ffffff"});
  os << "</g>\n";

  os << "<g id=\"lanes\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"1\">\n";
  for (const auto & lane : graph.lanes()) {
    os << "<polyline points=\"" << points_attr(v, lane.left_boundary) << "\"/>\n";
    os << "<polyline points=\"" << points_attr(v, lane.right_boundary) << "\"/>\n";
  }
  os << "</g>\n";

  const int n = std::max(1, style.tau_shades);
  const auto orange = gradient({200, 90, 0}, {255, 214, 160}, n);
  const auto blue = gradient({20, 60, 170}, {170, 200, 250}, n);
  os << "<g id=\"oru-occupied\" fill-opacity=\"0.85\">\n";
  emit_runs(os, v, shades(oru_tau, steps, n), orange);
  os << "</g>\n";
  os << "<g id=\"ego-drivable\" fill-opacity=\"0.85\">\n";
  emit_runs(os, v, shades(ego_tau, steps, n), blue);
  os << "</g>\n";
  if (at_horizon != nullptr && !at_horizon->empty()) {
    os << "<g id=\"drivable-at-horizon\">\n";
    emit_runs(os, v, mask_cells(*at_horizon), {"#2e9e44"});
    os << "</g>\n";
  }

  os << "<g id=\"agents\" stroke-width=\"1.5\">\n";
  for (const auto & [a, is_ego] : agents) {
    const auto corners =
      box_corners({a->state.x, a->state.y}, a->state.yaw, a->body.length, a->body.width);
    os << "<polygon points=\"" << points_attr(v, {corners.begin(), corners.end()})
       << "\" fill=\"" << (is_ego ? "#1f4fd1" : "#d15f1f") << "\" stroke=\"#000000\"><title>"
       << a->id << "</title></polygon>\n";
  }
  os << "</g>\n";

  const std::array<std::pair<const char *, const char *>, 5> entries{{
    {"#9e9e9e", "prohibited"},
    {"#ffffff", "permitted"},
    {orange.front().c_str(), "ORU occupied"},
    {blue.front().c_str(), "ego drivable"},
    {"#2e9e44", "drivable at H"},
  }};
  os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect x=\"0\" y=\"" << fmt(v.height_px()) << "\" width=\"" << fmt(v.width_px())
     << "\" height=\"" << fmt(legend_h) << "\" fill=\"#f4f4f4\"/>\n";
  double x = 6.0;
  for (const auto & [colour, label] : entries) {
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(v.height_px() + 5.0)
       << "\" width=\"12\" height=\"12\" fill=\"" << colour << "\" stroke=\"#000000\"/>\n";
    os << "<text x=\"" << fmt(x + 16.0) << "\" y=\"" << fmt(v.height_px() + 15.0) << "\">"
       << label << "</text>\n";
    x += 110.0;
  }
  os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(v.height_px() + 15.0) << "\">t = "
     << fmt(frame.result.t) << " s, "
     << (frame.result.frame_violation ? "frame violation" : "out available") << "</text>\n";
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

void write_frame_svg(
  const FrameArtifacts & frame, const Roadgraph & graph, const std::filesystem::path & path,
  const RenderStyle & style)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << render_frame_svg(frame, graph, style);
}

}  // namespace fsm
