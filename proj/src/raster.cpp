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

#include "fsm/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fsm
{

namespace
{
// Cells are shrunk by this much before the intersection test so that
// floating-point noise on grid-aligned edges does not claim a neighbour.
constexpr double kContactEps = 1e-9;

struct Interval
{
  double lo;
  double hi;
};

void require_same_spec(const GroundRaster & a, const GroundRaster & b)
{
  if (!(a.spec() == b.spec())) {
    throw std::logic_error("raster spec mismatch");
  }
}

std::uint64_t run_mask(int begin, int end)
{
  // bits [begin, end) of a single word, 0 <= begin < end <= 64
  const std::uint64_t upper = end == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << end) - 1);
  const std::uint64_t lower = (std::uint64_t{1} << begin) - 1;
  return upper & ~lower;
}

template <typename Fn>
bool for_each_word(const CellSpan & span, int words_per_row, Fn && fn)
{
  const int first_word = span.col_begin / 64;
  const int last_word = (span.col_end - 1) / 64;
  for (int w = first_word; w <= last_word; ++w) {
    const int lo = std::max(span.col_begin - w * 64, 0);
    const int hi = std::min(span.col_end - w * 64, 64);
    if (!fn(static_cast<std::size_t>(span.row) * words_per_row + w, run_mask(lo, hi))) {
      return false;
    }
  }
  return true;
}
}  // namespace

RasterSpec RasterSpec::covering(Vec2 min, Vec2 max, double resolution)
{
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("raster resolution must be positive");
  }
  RasterSpec spec;
  spec.resolution = resolution;
  spec.origin_x = std::floor(min.x / resolution) * resolution;
  spec.origin_y = std::floor(min.y / resolution) * resolution;
  spec.width = std::max(1, static_cast<int>(std::ceil((max.x - spec.origin_x) / resolution)));
  spec.height = std::max(1, static_cast<int>(std::ceil((max.y - spec.origin_y) / resolution)));
  return spec;
}

Vec2 RasterSpec::cell_center(int col, int row) const
{
  return {origin_x + (col + 0.5) * resolution, origin_y + (row + 0.5) * resolution};
}

void polygon_spans(const RasterSpec & spec, std::span<const Vec2> ring, std::vector<CellSpan> & out)
{
  if (ring.size() < 3) {
    return;
  }
  double y_min = ring[0].y;
  double y_max = ring[0].y;
  for (const Vec2 & p : ring) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  const double res = spec.resolution;
  const int row_lo =
    std::max(0, static_cast<int>(std::ceil((y_min - spec.origin_y + kContactEps) / res - 1.0)));
  const int row_hi =
    std::min(spec.height - 1, static_cast<int>(std::floor((y_max - spec.origin_y - kContactEps) / res)));

  std::vector<Interval> intervals;
  std::vector<double> crossings;
  const std::size_t n = ring.size();

  auto scanline = [&](double y) {
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = ring[i];
      const Vec2 b = ring[j];
      if ((a.y > y) != (b.y > y)) {
        crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      intervals.push_back({crossings[k], crossings[k + 1]});
    }
  };

  for (int row = row_lo; row <= row_hi; ++row) {
    const double slab_lo = spec.origin_y + row * res + kContactEps;
    const double slab_hi = spec.origin_y + (row + 1) * res - kContactEps;
    intervals.clear();

    // The x-projection of (polygon ∩ slab) is the projection of its boundary:
    // edge pieces inside the slab plus polygon-interior runs along the slab lines.
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = ring[j];
      const Vec2 b = ring[i];
      if (a.y == b.y) {
        if (a.y >= slab_lo && a.y <= slab_hi) {
          intervals.push_back({std::min(a.x, b.x), std::max(a.x, b.x)});
        }
        continue;
      }
      double t0 = (slab_lo - a.y) / (b.y - a.y);
      double t1 = (slab_hi - a.y) / (b.y - a.y);
      if (t0 > t1) std::swap(t0, t1);
      t0 = std::max(t0, 0.0);
      t1 = std::min(t1, 1.0);
      if (t0 > t1) {
        continue;
      }
      const double xa = a.x + t0 * (b.x - a.x);
      const double xb = a.x + t1 * (b.x - a.x);
      intervals.push_back({std::min(xa, xb), std::max(xa, xb)});
    }
    scanline(slab_lo);
    scanline(slab_hi);
    if (intervals.empty()) {
      continue;
    }

    std::sort(intervals.begin(), intervals.end(), [](const Interval & l, const Interval & r) {
      return l.lo < r.lo;
    });
    int run_begin = -1;
    int run_end = -1;
    for (const Interval & iv : intervals) {
      int c0 = static_cast<int>(std::ceil((iv.lo - spec.origin_x + kContactEps) / res - 1.0));
      int c1 = static_cast<int>(std::floor((iv.hi - spec.origin_x - kContactEps) / res)) + 1;
      c0 = std::max(c0, 0);
      c1 = std::min(c1, spec.width);
      if (c0 >= c1) {
        continue;
      }
      if (run_begin >= 0 && c0 <= run_end) {
        run_end = std::max(run_end, c1);
        continue;
      }
      if (run_begin >= 0) {
        out.push_back({row, run_begin, run_end});
      }
      run_begin = c0;
      run_end = c1;
    }
    if (run_begin >= 0) {
      out.push_back({row, run_begin, run_end});
    }
  }
}

void box_spans(
  const RasterSpec & spec, Vec2 center, double yaw, double length, double width, double padding,
  std::vector<CellSpan> & out)
{
  const auto corners = box_corners(center, yaw, length + 2.0 * padding, width + 2.0 * padding);
  polygon_spans(spec, corners, out);
}

GroundRaster::GroundRaster(const RasterSpec & spec)
: spec_(spec),
  words_per_row_((spec.width + 63) / 64),
  bits_(static_cast<std::size_t>(words_per_row_) * std::max(spec.height, 0), 0)
{
  if (!(spec.resolution > 0.0) || spec.width <= 0 || spec.height <= 0) {
    throw std::invalid_argument("raster spec must have positive resolution and size");
  }
}

bool GroundRaster::test(int col, int row) const
{
  if (col < 0 || row < 0 || col >= spec_.width || row >= spec_.height) {
    return false;
  }
  const std::size_t idx = static_cast<std::size_t>(row) * words_per_row_ + col / 64;
  return (bits_[idx] >> (col % 64)) & 1U;
}

void GroundRaster::set(int col, int row)
{
  if (col < 0 || row < 0 || col >= spec_.width || row >= spec_.height) {
    return;
  }
  bits_[static_cast<std::size_t>(row) * words_per_row_ + col / 64] |= std::uint64_t{1} << (col % 64);
}

void GroundRaster::fill(std::span<const CellSpan> spans)
{
  for (const CellSpan & span : spans) {
    for_each_word(span, words_per_row_, [this](std::size_t idx, std::uint64_t mask) {
      bits_[idx] |= mask;
      return true;
    });
  }
}

void GroundRaster::fill_all()
{
  for (int row = 0; row < spec_.height; ++row) {
    const CellSpan span{row, 0, spec_.width};
    fill({&span, 1});
  }
}

void GroundRaster::clear() { std::fill(bits_.begin(), bits_.end(), 0); }

bool GroundRaster::all_set(std::span<const CellSpan> spans) const
{
  for (const CellSpan & span : spans) {
    const bool ok = for_each_word(span, words_per_row_, [this](std::size_t idx, std::uint64_t mask) {
      return (bits_[idx] & mask) == mask;
    });
    if (!ok) {
      return false;
    }
  }
  return true;
}

bool GroundRaster::any_set(std::span<const CellSpan> spans) const
{
  for (const CellSpan & span : spans) {
    const bool none = for_each_word(span, words_per_row_, [this](std::size_t idx, std::uint64_t mask) {
      return (bits_[idx] & mask) == 0;
    });
    if (!none) {
      return true;
    }
  }
  return false;
}

std::size_t GroundRaster::popcount() const
{
  std::size_t count = 0;
  for (const std::uint64_t w : bits_) {
    count += static_cast<std::size_t>(std::popcount(w));
  }
  return count;
}

bool GroundRaster::empty() const
{
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

bool GroundRaster::is_subset_of(const GroundRaster & other) const
{
  require_same_spec(*this, other);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if ((bits_[i] & ~other.bits_[i]) != 0) {
      return false;
    }
  }
  return true;
}

GroundRaster GroundRaster::dilated(int cells) const
{
  GroundRaster out(spec_);
  for (int row = 0; row < spec_.height; ++row) {
    for (int col = 0; col < spec_.width; ++col) {
      if (!test(col, row)) {
        continue;
      }
      const int r0 = std::max(0, row - cells);
      const int r1 = std::min(spec_.height, row + cells + 1);
      const int c0 = std::max(0, col - cells);
      const int c1 = std::min(spec_.width, col + cells + 1);
      for (int r = r0; r < r1; ++r) {
        const CellSpan span{r, c0, c1};
        out.fill({&span, 1});
      }
    }
  }
  return out;
}

GroundRaster rasterize_box(
  Vec2 center, double yaw, double length, double width, double padding, const RasterSpec & spec)
{
  if (!(length > 0.0) || !(width > 0.0) || padding < 0.0) {
    throw std::invalid_argument("box needs positive length/width and non-negative padding");
  }
  std::vector<CellSpan> spans;
  box_spans(spec, center, yaw, length, width, padding, spans);
  GroundRaster mask(spec);
  mask.fill(spans);
  return mask;
}

GroundRaster rasterize_polygon(std::span<const Vec2> ring, const RasterSpec & spec)
{
  std::vector<CellSpan> spans;
  polygon_spans(spec, ring, spans);
  GroundRaster mask(spec);
  mask.fill(spans);
  return mask;
}

bool overlaps(const GroundRaster & a, const GroundRaster & b)
{
  require_same_spec(a, b);
  for (std::size_t i = 0; i < a.bits_.size(); ++i) {
    if ((a.bits_[i] & b.bits_[i]) != 0) {
      return true;
    }
  }
  return false;
}

GroundRaster & union_into(GroundRaster & dst, const GroundRaster & src)
{
  require_same_spec(dst, src);
  for (std::size_t i = 0; i < dst.bits_.size(); ++i) {
    dst.bits_[i] |= src.bits_[i];
  }
  return dst;
}

void write_pgm(const GroundRaster & mask, const std::filesystem::path & path)
{
  const RasterSpec & spec = mask.spec();
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  file << "P5\n" << spec.width << ' ' << spec.height << "\n255\n";
  std::vector<char> line(static_cast<std::size_t>(spec.width));
  for (int row = spec.height - 1; row >= 0; --row) {
    for (int col = 0; col < spec.width; ++col) {
      line[static_cast<std::size_t>(col)] = mask.test(col, row) ? static_cast<char>(255) : 0;
    }
    file.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace fsm
