// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "abcnet/gt_gen.hpp"
#include "abcnet/tensor.hpp"

namespace abcnet {

/// Output grid of a sampler. With pixel_center off the column parameter is
/// g_iw / w_out and the row weight g_ih / h_out; with it on both indices are
/// shifted by +0.5 so the grid is symmetric inside the region.
struct SampleGrid {
  std::size_t h_out = 32;
  std::size_t w_out = 8;
  bool pixel_center = false;
};

struct AlignOptions {
  /// Multiplies box coordinates before sampling, e.g. 0.25 for a 1/4 scale
  /// feature level.
  double scale = 1.0;
  /// Worker threads over output rows. Results do not depend on this value.
  unsigned threads = 1;
};

/// Axis-aligned rectangle (x0, y0) - (x1, y1) in pixel coordinates.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

/// Four-neighbour bilinear read of every channel of a [C, H, W] map at
/// (p.x, p.y) in pixel-index coordinates. Neighbours outside the map read
/// as zero.
std::vector<double> bilinear_at(const Tensor& feat, Point2 p);

/// BezierAlign: output[c][ih][iw] samples the point
///   op = bottom(t) * v + top(t) * (1 - v)
/// where t and v are the column parameter and row weight of the grid.
Tensor bezier_align(const Tensor& feat, const BezierBBox& bbox, const SampleGrid& grid,
                    const AlignOptions& options = {});

/// Bilinear crop-and-resize of an axis-aligned rectangle, using the same grid
/// convention as bezier_align.
Tensor horizontal_align(const Tensor& feat, const Rect& rect, const SampleGrid& grid,
                        const AlignOptions& options = {});

/// Sampling over the bilinear patch spanned by TL, TR, BR, BL.
Tensor quad_align(const Tensor& feat, const std::array<Point2, 4>& corners,
                  const SampleGrid& grid, const AlignOptions& options = {});

/// [2, h, w]: channel 0 holds the column index x, channel 1 the row index y.
Tensor make_coord_channels(std::size_t h, std::size_t w);

/// Appends the two coordinate channels after the last channel of a [C, h, w]
/// map.
Tensor concat_coords(const Tensor& feat);

}  // namespace abcnet
