// SPDX-License-Identifier: Apache-2.0
#include "abcnet/codec.hpp"

#include <algorithm>
#include <string>

#include "abcnet/error.hpp"

namespace abcnet {

RegressionTarget encode_targets(const BezierBBox& bbox) {
  const auto corners = bbox_corners(bbox);
  RegressionTarget target;
  target.x_min = corners[0].x;
  target.y_min = corners[0].y;
  for (const Point2& c : corners) {
    target.x_min = std::min(target.x_min, c.x);
    target.y_min = std::min(target.y_min, c.y);
  }
  const Point2 origin{target.x_min, target.y_min};
  for (const BezierCurve* curve : {&bbox.top(), &bbox.bottom()}) {
    for (const Point2& p : curve->control_points()) target.deltas.push_back(p - origin);
  }
  return target;
}

BezierBBox decode_targets(const RegressionTarget& target, int order) {
  if (order < 1 || target.deltas.size() != 2 * (static_cast<std::size_t>(order) + 1)) {
    throw DimensionError("decode_targets: " + std::to_string(target.deltas.size()) +
                         " deltas do not describe two order-" + std::to_string(order) + " curves");
  }
  const Point2 origin{target.x_min, target.y_min};
  const auto per_curve = static_cast<std::ptrdiff_t>(order) + 1;
  auto rebuild = [&](std::ptrdiff_t offset) {
    std::vector<Point2> cp;
    cp.reserve(static_cast<std::size_t>(per_curve));
    for (auto it = target.deltas.begin() + offset; it != target.deltas.begin() + offset + per_curve;
         ++it) {
      cp.push_back(origin + *it);
    }
    return BezierCurve(std::move(cp));
  };
  return BezierBBox(rebuild(0), rebuild(per_curve));
}

}  // namespace abcnet
