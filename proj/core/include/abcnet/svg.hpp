// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abcnet/gt_gen.hpp"

namespace abcnet {

struct SvgStyle {
  std::string stroke = "none";
  std::string fill = "none";
  double stroke_width = 1.0;
  std::optional<std::string> dash;  // stroke-dasharray
};

struct SvgPolyline {
  std::vector<Point2> points;
  bool closed = false;
  SvgStyle style;
};

struct SvgPath {
  std::string d;
  SvgStyle style;
};

struct SvgCircle {
  Point2 center;
  double radius = 1.0;
  SvgStyle style;
};

struct SvgText {
  Point2 anchor;
  std::string text;
  double font_size = 10.0;
  std::string fill = "black";
};

using SvgElement = std::variant<SvgPolyline, SvgPath, SvgCircle, SvgText>;

/// Layers are drawn in insertion order.
struct SvgScene {
  double width = 0.0;
  double height = 0.0;
  std::vector<std::vector<SvgElement>> layers;

  /// Deterministic XML: coordinates printed with three decimals, text
  /// escaped. Throws DomainError on non-finite geometry or empty canvas.
  std::string to_string() const;
};

/// Scene in the style of a ground-truth visualisation: optional source
/// polygons (blue), fitted curves (green paths; cubic and lower orders use
/// native SVG segments, higher orders a dense polyline), dashed red control
/// polygons and control points as circles.
SvgScene render_bezier_svg(const std::vector<BezierBBox>& bboxes,
                           const std::vector<std::vector<Point2>>& annotations, double width,
                           double height, const std::vector<std::string>& labels = {});

}  // namespace abcnet
