// SPDX-License-Identifier: Apache-2.0
#include "abcnet/align.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

void require_grid(const SampleGrid& grid) {
  if (grid.h_out == 0 || grid.w_out == 0) throw DomainError("align: empty sampling grid");
}

void require_scale(const AlignOptions& options) {
  if (!(std::isfinite(options.scale) && options.scale > 0.0)) {
    throw DomainError("align: scale must be positive and finite");
  }
}

void require_feature_map(const Tensor& feat, const char* op) {
  require_rank(feat, 3, op);
}

double column_param(const SampleGrid& grid, std::size_t iw) {
  const double offset = grid.pixel_center ? 0.5 : 0.0;
  return (static_cast<double>(iw) + offset) / static_cast<double>(grid.w_out);
}

double row_weight(const SampleGrid& grid, std::size_t ih) {
  const double offset = grid.pixel_center ? 0.5 : 0.0;
  return (static_cast<double>(ih) + offset) / static_cast<double>(grid.h_out);
}

// Adds weight * feat[:, y, x] into out when (x, y) lies on the map.
void accumulate(const Tensor& feat, std::int64_t x, std::int64_t y, double weight, double* out) {
  const auto height = static_cast<std::int64_t>(feat.dim(1));
  const auto width = static_cast<std::int64_t>(feat.dim(2));
  if (x < 0 || y < 0 || x >= width || y >= height || weight == 0.0) return;
  const std::size_t plane = feat.dim(1) * feat.dim(2);
  const std::size_t offset = static_cast<std::size_t>(y) * feat.dim(2) + static_cast<std::size_t>(x);
  for (std::size_t c = 0; c < feat.dim(0); ++c) out[c] += weight * feat[c * plane + offset];
}

void bilinear_into(const Tensor& feat, Point2 p, double* out) {
  if (!is_finite(p)) throw DomainError("bilinear_at: non-finite sampling point");
  std::fill(out, out + feat.dim(0), 0.0);
  // Entirely outside the one-pixel padding band: every neighbour is zero.
  if (p.x <= -1.0 || p.y <= -1.0 || p.x >= static_cast<double>(feat.dim(2)) ||
      p.y >= static_cast<double>(feat.dim(1))) {
    return;
  }
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  const double wx = p.x - fx;
  const double wy = p.y - fy;
  const auto x0 = static_cast<std::int64_t>(fx);
  const auto y0 = static_cast<std::int64_t>(fy);
  accumulate(feat, x0, y0, (1.0 - wx) * (1.0 - wy), out);
  accumulate(feat, x0 + 1, y0, wx * (1.0 - wy), out);
  accumulate(feat, x0, y0 + 1, (1.0 - wx) * wy, out);
  accumulate(feat, x0 + 1, y0 + 1, wx * wy, out);
}

bool all_finite(const std::vector<Point2>& points) {
  return std::all_of(points.begin(), points.end(), [](Point2 p) { return is_finite(p); });
}

// Shared driver: every output column has an upper and a lower boundary point;
// output rows interpolate between them.
Tensor sample_columns(const Tensor& feat, const std::vector<Point2>& upper,
                      const std::vector<Point2>& lower, const SampleGrid& grid,
                      unsigned threads) {
  // Checked up front: workers must not throw.
  if (!all_finite(upper) || !all_finite(lower)) {
    throw DomainError("align: non-finite boundary point");
  }
  const std::size_t channels = feat.dim(0);
  Tensor out({channels, grid.h_out, grid.w_out});
  const std::size_t plane = grid.h_out * grid.w_out;

  auto run_rows = [&](std::size_t row_begin, std::size_t row_end) {
    std::vector<double> values(channels);
    for (std::size_t ih = row_begin; ih < row_end; ++ih) {
      const double v = row_weight(grid, ih);
      for (std::size_t iw = 0; iw < grid.w_out; ++iw) {
        const Point2 op = lower[iw] * v + upper[iw] * (1.0 - v);
        bilinear_into(feat, op, values.data());
        for (std::size_t c = 0; c < channels; ++c) {
          out[c * plane + ih * grid.w_out + iw] = values[c];
        }
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, grid.h_out);
  if (workers == 1) {
    run_rows(0, grid.h_out);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (grid.h_out + workers - 1) / workers;
  for (std::size_t begin = 0; begin < grid.h_out; begin += chunk) {
    pool.emplace_back(run_rows, begin, std::min(grid.h_out, begin + chunk));
  }
  return out;
}

Point2 scaled(Point2 p, double scale) { return {p.x * scale, p.y * scale}; }

}  // namespace

std::vector<double> bilinear_at(const Tensor& feat, Point2 p) {
  require_feature_map(feat, "bilinear_at");
  std::vector<double> out(feat.dim(0));
  bilinear_into(feat, p, out.data());
  return out;
}

Tensor bezier_align(const Tensor& feat, const BezierBBox& bbox, const SampleGrid& grid,
                    const AlignOptions& options) {
  require_feature_map(feat, "bezier_align");
  require_grid(grid);
  require_scale(options);
  std::vector<Point2> upper(grid.w_out);
  std::vector<Point2> lower(grid.w_out);
  for (std::size_t iw = 0; iw < grid.w_out; ++iw) {
    const double t = column_param(grid, iw);
    upper[iw] = scaled(eval_curve(bbox.top(), t), options.scale);
    lower[iw] = scaled(eval_curve(bbox.bottom(), t), options.scale);
  }
  return sample_columns(feat, upper, lower, grid, options.threads);
}

Tensor horizontal_align(const Tensor& feat, const Rect& rect, const SampleGrid& grid,
                        const AlignOptions& options) {
  require_feature_map(feat, "horizontal_align");
  require_grid(grid);
  require_scale(options);
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    throw DegenerateError("horizontal_align: rectangle must satisfy x1 > x0 and y1 > y0");
  }
  std::vector<Point2> upper(grid.w_out);
  std::vector<Point2> lower(grid.w_out);
  for (std::size_t iw = 0; iw < grid.w_out; ++iw) {
    const double x = rect.x0 + (rect.x1 - rect.x0) * column_param(grid, iw);
    upper[iw] = scaled({x, rect.y0}, options.scale);
    lower[iw] = scaled({x, rect.y1}, options.scale);
  }
  return sample_columns(feat, upper, lower, grid, options.threads);
}

Tensor quad_align(const Tensor& feat, const std::array<Point2, 4>& corners,
                  const SampleGrid& grid, const AlignOptions& options) {
  require_feature_map(feat, "quad_align");
  require_grid(grid);
  require_scale(options);
  for (const Point2& p : corners) {
    if (!is_finite(p)) throw DomainError("quad_align: non-finite corner");
  }
  if (polygon_signed_area(corners) == 0.0) throw DegenerateError("quad_align: zero-area quad");
  const auto& [tl, tr, br, bl] = corners;
  std::vector<Point2> upper(grid.w_out);
  std::vector<Point2> lower(grid.w_out);
  for (std::size_t iw = 0; iw < grid.w_out; ++iw) {
    const double t = column_param(grid, iw);
    upper[iw] = scaled(lerp(tl, tr, t), options.scale);
    lower[iw] = scaled(lerp(bl, br, t), options.scale);
  }
  return sample_columns(feat, upper, lower, grid, options.threads);
}

Tensor make_coord_channels(std::size_t h, std::size_t w) {
  if (h == 0 || w == 0) throw DomainError("make_coord_channels: h and w must be >= 1");
  Tensor out({2, h, w});
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      out.at(0, y, x) = static_cast<double>(x);
      out.at(1, y, x) = static_cast<double>(y);
    }
  }
  return out;
}

Tensor concat_coords(const Tensor& feat) {
  require_rank(feat, 3, "concat_coords");
  const std::size_t channels = feat.dim(0);
  const std::size_t h = feat.dim(1);
  const std::size_t w = feat.dim(2);
  const Tensor coords = make_coord_channels(h, w);
  std::vector<double> data(feat.data().begin(), feat.data().end());
  data.insert(data.end(), coords.data().begin(), coords.data().end());
  return Tensor({channels + 2, h, w}, std::move(data));
}

}  // namespace abcnet
