// SPDX-License-Identifier: Apache-2.0
#include "abcnet/gt_gen.hpp"

#include <algorithm>
#include <string>

#include "abcnet/error.hpp"

namespace abcnet {

BezierBBox::BezierBBox(BezierCurve top, BezierCurve bottom)
    : top_(std::move(top)), bottom_(std::move(bottom)) {
  if (top_.order() != bottom_.order()) {
    throw DomainError("BezierBBox: top order " + std::to_string(top_.order()) +
                      " differs from bottom order " + std::to_string(bottom_.order()));
  }
}

BezierCurve straight_curve(Point2 from, Point2 to, int order) {
  std::vector<Point2> cp(static_cast<std::size_t>(order) + 1);
  cp.front() = from;
  cp.back() = to;
  for (int i = 1; i < order; ++i) cp[i] = lerp(from, to, static_cast<double>(i) / order);
  return BezierCurve(std::move(cp));
}

BezierCurve fit_side(std::span<const Point2> side, int order) {
  const std::vector<Point2> merged = merge_coincident(side);
  if (merged.size() < 2) throw DegenerateError("fit_side: boundary side collapses to a point");
  if (merged.size() == 2) return straight_curve(merged.front(), merged.back(), order);
  const ParamVector ts = chord_length_params(merged);
  const int effective = std::min(order, static_cast<int>(merged.size()) - 1);
  BezierCurve curve = fit_curve(merged, ts, effective);
  return effective == order ? curve : elevate_order(curve, order);
}

BezierBBox sides_to_bbox(std::span<const Point2> top, std::span<const Point2> bottom, int order) {
  if (order < 3 || order > kMaxFitOrder) {
    throw DomainError("sides_to_bbox: order " + std::to_string(order) + " outside {3, 4, 5}");
  }
  if (top.size() < 2 || bottom.size() < 2) {
    throw DomainError("sides_to_bbox: each side needs at least two points");
  }
  return BezierBBox(fit_side(top, order), fit_side(bottom, order));
}

PolygonSides split_polygon(const PolygonAnnotation& ann) {
  const auto count = ann.points.size();
  if (count < 4 || count % 2 != 0) {
    throw DomainError("polygon: expected an even number (>= 4) of points, got " +
                      std::to_string(count));
  }
  const auto m = static_cast<std::ptrdiff_t>(count / 2);
  PolygonSides sides{{ann.points.begin(), ann.points.begin() + m},
                     {ann.points.begin() + m, ann.points.end()}};
  std::reverse(sides.bottom.begin(), sides.bottom.end());
  return sides;
}

FitResidual side_residual(std::span<const Point2> side, const BezierCurve& curve) {
  const std::vector<Point2> merged = merge_coincident(side);
  if (merged.size() < 2) throw DegenerateError("side_residual: boundary side collapses to a point");
  return fit_residual(curve, merged, chord_length_params(merged));
}

BezierBBox polygon_to_bbox(const PolygonAnnotation& ann, int order) {
  const PolygonSides sides = split_polygon(ann);
  return sides_to_bbox(sides.top, sides.bottom, order);
}

BezierBBox quad_to_bbox(const std::array<Point2, 4>& corners) {
  const auto& [tl, tr, br, bl] = corners;
  for (const Point2& p : corners) {
    if (!is_finite(p)) throw DomainError("quad_to_bbox: non-finite corner");
  }
  if (tl == tr || bl == br) throw DegenerateError("quad_to_bbox: zero-length long side");
  return BezierBBox(straight_curve(tl, tr, 3), straight_curve(bl, br, 3));
}

std::array<Point2, 4> bbox_corners(const BezierBBox& bbox) {
  return {bbox.top().front(), bbox.top().back(), bbox.bottom().back(), bbox.bottom().front()};
}

std::vector<Point2> bbox_to_polygon(const BezierBBox& bbox, int samples_per_side) {
  if (samples_per_side < 2) throw DomainError("bbox_to_polygon: samples_per_side must be >= 2");
  std::vector<Point2> polygon;
  polygon.reserve(2 * static_cast<std::size_t>(samples_per_side));
  const double step = 1.0 / (samples_per_side - 1);
  for (int k = 0; k < samples_per_side; ++k) {
    const double t = k == samples_per_side - 1 ? 1.0 : k * step;
    polygon.push_back(eval_curve(bbox.top(), t));
  }
  for (int k = samples_per_side - 1; k >= 0; --k) {
    const double t = k == samples_per_side - 1 ? 1.0 : k * step;
    polygon.push_back(eval_curve(bbox.bottom(), t));
  }
  return polygon;
}

BezierBBox translate(const BezierBBox& bbox, Point2 offset) {
  auto shift = [&](const BezierCurve& c) {
    std::vector<Point2> cp(c.control_points().begin(), c.control_points().end());
    for (Point2& p : cp) p = p + offset;
    return BezierCurve(std::move(cp));
  };
  return BezierBBox(shift(bbox.top()), shift(bbox.bottom()));
}

double polygon_signed_area(std::span<const Point2> polygon) {
  double twice = 0.0;
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const Point2& a = polygon[k];
    const Point2& b = polygon[(k + 1) % polygon.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

}  // namespace abcnet
