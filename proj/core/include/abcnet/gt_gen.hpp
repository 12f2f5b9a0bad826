// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abcnet/bezier.hpp"

namespace abcnet {

/// Closed text polygon. Canonical order: the top side left to right, then the
/// bottom side right to left, m points each.
struct PolygonAnnotation {
  std::vector<Point2> points;
  std::string transcript;
  std::optional<std::string> language;
};

/// Text region bounded by two curves of equal order, both running left to
/// right along the reading direction.
class BezierBBox {
 public:
  BezierBBox(BezierCurve top, BezierCurve bottom);

  const BezierCurve& top() const { return top_; }
  const BezierCurve& bottom() const { return bottom_; }
  int order() const { return top_.order(); }

  friend bool operator==(const BezierBBox&, const BezierBBox&) = default;

 private:
  BezierCurve top_;
  BezierCurve bottom_;
};

/// Straight boundary of `order` expressed with control points evenly spaced
/// between `from` and `to`.
BezierCurve straight_curve(Point2 from, Point2 to, int order);

/// Fits one boundary side. Consecutive duplicate points are merged first;
/// when fewer than order + 1 distinct points remain the side is fitted at the
/// highest order those points support and degree-elevated back to `order`.
BezierCurve fit_side(std::span<const Point2> side, int order);

struct PolygonSides {
  std::vector<Point2> top;
  std::vector<Point2> bottom;  // reversed, so it also runs left to right
};

/// Splits a canonical polygon into its two long sides. Throws DomainError
/// unless the point count is even and at least 4.
PolygonSides split_polygon(const PolygonAnnotation& ann);

/// Residual of `curve` against one side after the same duplicate merge and
/// chord-length parameterisation used by fit_side.
FitResidual side_residual(std::span<const Point2> side, const BezierCurve& curve);

/// Ground-truth conversion of a closed polygon in canonical order.
/// Orders 3 and 4 are the intended range; 5 is accepted but callers should
/// flag it (higher orders overfit annotation noise).
BezierBBox polygon_to_bbox(const PolygonAnnotation& ann, int order);

/// Same conversion for annotations whose sides are already split, both
/// running left to right.
BezierBBox sides_to_bbox(std::span<const Point2> top, std::span<const Point2> bottom, int order);

/// Cubic box of a straight quadrilateral with the two extra control points of
/// each long side at its trisection points. Corners: TL, TR, BR, BL.
BezierBBox quad_to_bbox(const std::array<Point2, 4>& corners);

/// top(0), top(1), bottom(1), bottom(0).
std::array<Point2, 4> bbox_corners(const BezierBBox& bbox);

/// Closed polygon: top sampled left to right, then bottom right to left at
/// uniform parameters; 2 * samples_per_side vertices.
std::vector<Point2> bbox_to_polygon(const BezierBBox& bbox, int samples_per_side);

/// Translates every control point of both curves.
BezierBBox translate(const BezierBBox& bbox, Point2 offset);

/// Signed shoelace area (positive for counter-clockwise in a y-up frame).
double polygon_signed_area(std::span<const Point2> polygon);

}  // namespace abcnet
