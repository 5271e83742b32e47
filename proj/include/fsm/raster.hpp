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

#ifndef FSM__RASTER_HPP_
#define FSM__RASTER_HPP_

#include "fsm/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fsm
{

/// Placement of the ground-plane grid. Cell (col, row) covers
/// [origin_x + col * resolution, origin_x + (col + 1) * resolution) in x and
/// the analogous interval in y.
struct RasterSpec
{
  double origin_x{0.0};
  double origin_y{0.0};
  double resolution{0.3};
  int width{0};
  int height{0};

  friend bool operator==(const RasterSpec &, const RasterSpec &) = default;

  /// Smallest grid at `resolution` whose cells cover [min, max], with the
  /// origin snapped to a multiple of the resolution.
  static RasterSpec covering(Vec2 min, Vec2 max, double resolution);

  double cell_area() const { return resolution * resolution; }
  Vec2 cell_center(int col, int row) const;
};

/// Half-open run of columns [col_begin, col_end) within one row.
struct CellSpan
{
  int row;
  int col_begin;
  int col_end;
};

/// Conservative scan conversion: appends to `out` every in-bounds cell whose
/// square meets the closed polygon. Works for any simple polygon, convex or
/// not. Contact of zero width (a polygon edge lying exactly on a grid line)
/// does not count, so grid-aligned rectangles claim no extra ring of cells.
void polygon_spans(const RasterSpec & spec, std::span<const Vec2> ring, std::vector<CellSpan> & out);

/// Spans of an oriented rectangle grown by `padding` on every side.
void box_spans(
  const RasterSpec & spec, Vec2 center, double yaw, double length, double width, double padding,
  std::vector<CellSpan> & out);

class GroundRaster
{
public:
  GroundRaster() = default;
  explicit GroundRaster(const RasterSpec & spec);

  const RasterSpec & spec() const { return spec_; }

  bool test(int col, int row) const;
  void set(int col, int row);
  void fill(std::span<const CellSpan> spans);
  void fill_all();
  void clear();

  /// True when every cell in `spans` is set.
  bool all_set(std::span<const CellSpan> spans) const;
  /// True when at least one cell in `spans` is set.
  bool any_set(std::span<const CellSpan> spans) const;

  std::size_t popcount() const;
  bool empty() const;
  double area_m2() const { return static_cast<double>(popcount()) * spec_.cell_area(); }

  /// Cell-wise a ⊆ b.
  bool is_subset_of(const GroundRaster & other) const;

  /// Chebyshev dilation by `cells`.
  GroundRaster dilated(int cells) const;

  std::span<const std::uint64_t> words() const { return bits_; }
  int words_per_row() const { return words_per_row_; }

  friend bool operator==(const GroundRaster & a, const GroundRaster & b)
  {
    return a.spec_ == b.spec_ && a.bits_ == b.bits_;
  }

private:
  friend bool overlaps(const GroundRaster & a, const GroundRaster & b);
  friend GroundRaster & union_into(GroundRaster & dst, const GroundRaster & src);

  RasterSpec spec_{};
  int words_per_row_{0};
  std::vector<std::uint64_t> bits_;
};

GroundRaster rasterize_box(
  Vec2 center, double yaw, double length, double width, double padding, const RasterSpec & spec);

GroundRaster rasterize_polygon(std::span<const Vec2> ring, const RasterSpec & spec);

/// Nonzero bitwise AND. Throws std::logic_error on mismatched specs.
bool overlaps(const GroundRaster & a, const GroundRaster & b);

/// Bitwise OR of `src` into `dst`. Throws std::logic_error on mismatched specs.
GroundRaster & union_into(GroundRaster & dst, const GroundRaster & src);

/// Binary PGM (P5), one byte per cell, 0 = free, 255 = set. The first image
/// row is the northernmost raster row.
void write_pgm(const GroundRaster & mask, const std::filesystem::path & path);

}  // namespace fsm

#endif  // FSM__RASTER_HPP_
