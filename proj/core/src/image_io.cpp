// SPDX-License-Identifier: Apache-2.0
#include "abcnet/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

png_uint_32 format_for_channels(std::size_t channels) {
  switch (channels) {
    case 1: return PNG_FORMAT_GRAY;
    case 2: return PNG_FORMAT_GA;
    case 3: return PNG_FORMAT_RGB;
    case 4: return PNG_FORMAT_RGBA;
    default: throw DimensionError("png: unsupported channel count " + std::to_string(channels));
  }
}

struct ImageGuard {
  png_image* image;
  ~ImageGuard() { png_image_free(image); }
};

}  // namespace

Tensor read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  ImageGuard guard{&image};
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("png: cannot read " + path.string() + ": " + image.message);
  }
  const std::size_t channels = PNG_IMAGE_SAMPLE_CHANNELS(image.format);
  image.format = format_for_channels(channels);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    throw IoError("png: cannot decode " + path.string() + ": " + image.message);
  }

  const std::size_t h = image.height;
  const std::size_t w = image.width;
  Tensor out({channels, h, w});
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        out.at(c, y, x) = buffer[(y * w + x) * channels + c] / 255.0;
      }
    }
  }
  return out;
}

void write_png(const std::filesystem::path& path, const Tensor& image_tensor) {
  require_rank(image_tensor, 3, "write_png");
  const std::size_t channels = image_tensor.dim(0);
  const std::size_t h = image_tensor.dim(1);
  const std::size_t w = image_tensor.dim(2);

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.format = format_for_channels(channels);
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);

  std::vector<png_byte> buffer(h * w * channels);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        const double v = std::clamp(image_tensor.at(c, y, x), 0.0, 1.0);
        buffer[(y * w + x) * channels + c] = static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
  }
  ImageGuard guard{&image};
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("png: cannot write " + path.string() + ": " + image.message);
  }
}

Tensor rectify_image(const Tensor& image, const BezierBBox& bbox, const SampleGrid& grid,
                     const AlignOptions& options) {
  require_rank(image, 3, "rectify_image");
  // The boundary itself (not the control polygon) must stay within half an
  // image size of the frame.
  const double h = static_cast<double>(image.dim(1));
  const double w = static_cast<double>(image.dim(2));
  const double margin = 0.5 * std::max(h, w);
  for (const Point2& p : bbox_to_polygon(bbox, 16)) {
    const Point2 q = options.scale * p;
    if (q.x < -margin || q.y < -margin || q.x > w + margin || q.y > h + margin) {
      throw DomainError("rectify_image: text region lies outside the image");
    }
  }
  return bezier_align(image, bbox, grid, options);
}

}  // namespace abcnet
