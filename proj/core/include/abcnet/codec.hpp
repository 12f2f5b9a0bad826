// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "abcnet/gt_gen.hpp"

namespace abcnet {

/// Control points expressed as pixel offsets from the minimum corner of the
/// four box endpoints. Deltas run over the top curve b_0..b_n, then the
/// bottom curve b_0..b_n.
struct RegressionTarget {
  double x_min = 0.0;
  double y_min = 0.0;
  std::vector<Point2> deltas;
};

RegressionTarget encode_targets(const BezierBBox& bbox);

/// Inverse of encode_targets. Throws DimensionError unless
/// deltas.size() == 2 * (order + 1).
BezierBBox decode_targets(const RegressionTarget& target, int order);

}  // namespace abcnet
