// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "abcnet/align.hpp"
#include "abcnet/tensor.hpp"

namespace abcnet {

/// Reads an 8-bit PNG into a [C, H, W] tensor with values in [0, 1].
/// C is 1 (gray), 2 (gray + alpha), 3 (RGB) or 4 (RGBA).
Tensor read_png(const std::filesystem::path& path);

/// Writes a [C, H, W] tensor (C in 1..4) as an 8-bit PNG; values are clamped
/// to [0, 1] and rounded to the nearest of 256 levels.
void write_png(const std::filesystem::path& path, const Tensor& image);

/// Warps the region between the two curves of `bbox` onto the grid.
Tensor rectify_image(const Tensor& image, const BezierBBox& bbox, const SampleGrid& grid,
                     const AlignOptions& options = {});

}  // namespace abcnet
