// SPDX-License-Identifier: Apache-2.0
#include "abcnet/aet.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <string>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

void require_threshold(double threshold, const char* op) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DomainError(std::string(op) + ": threshold outside [0, 1]");
  }
}

// False for outlines that cannot be clipped: self-intersecting or zero area.
bool to_polygon(const std::vector<Point2>& outline, BgPolygon& out) {
  for (const Point2& p : outline) bg::append(out.outer(), BgPoint(p.x, p.y));
  bg::correct(out);
  return bg::is_valid(out) && bg::area(out) > 0.0;
}

}  // namespace

std::vector<Detection> filter_by_score(const std::vector<Detection>& dets, double threshold) {
  require_threshold(threshold, "filter_by_score");
  std::vector<Detection> kept;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(kept),
               [&](const Detection& d) { return d.score >= threshold; });
  return kept;
}

double polygon_iou(const BezierBBox& a, const BezierBBox& b, int samples_per_side) {
  const std::vector<Point2> outline_a = bbox_to_polygon(a, samples_per_side);
  const std::vector<Point2> outline_b = bbox_to_polygon(b, samples_per_side);
  BgPolygon poly_a;
  BgPolygon poly_b;
  if (!to_polygon(outline_a, poly_a) || !to_polygon(outline_b, poly_b)) return 0.0;
  if (outline_a == outline_b) return 1.0;

  BgMultiPolygon overlap;
  bg::intersection(poly_a, poly_b, overlap);
  const double inter = bg::area(overlap);
  const double uni = bg::area(poly_a) + bg::area(poly_b) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<std::size_t> nms_indices(const std::vector<Detection>& dets, double iou_threshold,
                                     int samples_per_side) {
  require_threshold(iou_threshold, "nms");
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return dets[lhs].score > dets[rhs].score;
  });

  std::vector<std::size_t> kept;
  for (std::size_t candidate : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return polygon_iou(dets[k].bbox, dets[candidate].bbox, samples_per_side) > iou_threshold;
    });
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold,
                           int samples_per_side) {
  std::vector<Detection> out;
  for (std::size_t i : nms_indices(dets, iou_threshold, samples_per_side)) out.push_back(dets[i]);
  return out;
}

double control_point_distance(const BezierBBox& detected, const BezierBBox& truth) {
  if (detected.order() != truth.order()) {
    throw DomainError("control_point_distance: detection order " +
                      std::to_string(detected.order()) + " differs from ground-truth order " +
                      std::to_string(truth.order()));
  }
  double sum = 0.0;
  auto add_curve = [&](const BezierCurve& lhs, const BezierCurve& rhs) {
    for (int i = 0; i <= lhs.order(); ++i) {
      sum += std::abs(lhs[i].x - rhs[i].x) + std::abs(lhs[i].y - rhs[i].y);
    }
  };
  add_curve(detected.top(), truth.top());
  add_curve(detected.bottom(), truth.bottom());
  return sum;
}

std::vector<Assignment> aet_assign(const std::vector<Detection>& dets,
                                   const std::vector<GroundTruth>& gts) {
  if (gts.empty()) throw DomainError("aet_assign: ground-truth set is empty");
  std::vector<Assignment> out;
  out.reserve(dets.size());
  for (std::size_t d = 0; d < dets.size(); ++d) {
    Assignment best{d, 0, control_point_distance(dets[d].bbox, gts[0].bbox)};
    for (std::size_t g = 1; g < gts.size(); ++g) {
      const double dist = control_point_distance(dets[d].bbox, gts[g].bbox);
      if (dist < best.distance) best = {d, g, dist};
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace abcnet
