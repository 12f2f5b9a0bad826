// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "abcnet/gt_gen.hpp"

namespace abcnet {

struct Detection {
  BezierBBox bbox;
  double score = 0.0;
};

struct GroundTruth {
  BezierBBox bbox;
  std::string transcript;
};

struct Assignment {
  std::size_t detection_index = 0;
  std::size_t gt_index = 0;
  double distance = 0.0;
};

/// Polygon resolution used when NMS compares curved boxes.
inline constexpr int kNmsSamplesPerSide = 16;

/// Stable subsequence of detections whose score is >= threshold.
std::vector<Detection> filter_by_score(const std::vector<Detection>& dets, double threshold);

/// Intersection over union of the two sampled outlines. Zero-area or
/// self-intersecting outlines give 0.
double polygon_iou(const BezierBBox& a, const BezierBBox& b,
                   int samples_per_side = kNmsSamplesPerSide);

/// Greedy NMS. Returns the indices of the kept detections in descending
/// score order; equal scores keep the lower original index first. A candidate
/// is dropped when its IoU with any kept detection exceeds iou_threshold.
std::vector<std::size_t> nms_indices(const std::vector<Detection>& dets, double iou_threshold,
                                     int samples_per_side = kNmsSamplesPerSide);

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold,
                           int samples_per_side = kNmsSamplesPerSide);

/// Sum of absolute coordinate differences over all control points of both
/// curves. Throws DomainError when the orders differ.
double control_point_distance(const BezierBBox& detected, const BezierBBox& truth);

/// Assigns every detection the ground truth with the smallest control point
/// distance (lowest index on ties). Several detections may share one ground
/// truth. Throws DomainError on an empty ground-truth set or order mismatch.
std::vector<Assignment> aet_assign(const std::vector<Detection>& dets,
                                   const std::vector<GroundTruth>& gts);

}  // namespace abcnet
