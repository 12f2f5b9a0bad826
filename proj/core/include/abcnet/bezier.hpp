// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace abcnet {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }

double distance(Point2 a, Point2 b);
bool is_finite(Point2 p);

/// Linear interpolation a + s * (b - a).
inline Point2 lerp(Point2 a, Point2 b, double s) { return a + s * (b - a); }

/// Highest order the binomial table covers.
inline constexpr int kMaxBezierOrder = 10;
/// Orders accepted by the least-squares fitter.
inline constexpr int kMaxFitOrder = 5;

/// Exact binomial coefficient C(n, k) for 0 <= k <= n <= kMaxBezierOrder.
std::int64_t binomial(int n, int k);

/// Bernstein basis polynomial B_{i,n}(t) = C(n,i) t^i (1-t)^(n-i).
double bernstein(int i, int n, double t);

/// A polynomial Bezier curve of order n (n + 1 control points, pixel units).
class BezierCurve {
 public:
  /// Throws DomainError unless 1 <= order <= kMaxBezierOrder and every
  /// control point is finite.
  explicit BezierCurve(std::vector<Point2> control_points);

  int order() const { return static_cast<int>(control_points_.size()) - 1; }
  std::span<const Point2> control_points() const { return control_points_; }
  const Point2& operator[](std::size_t i) const { return control_points_[i]; }
  const Point2& front() const { return control_points_.front(); }
  const Point2& back() const { return control_points_.back(); }

  friend bool operator==(const BezierCurve&, const BezierCurve&) = default;

 private:
  std::vector<Point2> control_points_;
};

/// Chord-length parameters: 0 = ts[0] <= ts[1] <= ... <= ts[m] = 1.
class ParamVector {
 public:
  /// Throws DomainError when the sequence violates the invariant.
  explicit ParamVector(std::vector<double> ts);

  std::span<const double> values() const { return ts_; }
  std::size_t size() const { return ts_.size(); }
  double operator[](std::size_t i) const { return ts_[i]; }

 private:
  std::vector<double> ts_;
};

/// c(t) = sum_i b_i B_{i,n}(t). Returns the end control points bit-exactly at
/// t = 0 and t = 1.
Point2 eval_curve(const BezierCurve& curve, double t);

/// Ratio of cumulative polyline length to the total perimeter at each vertex.
/// Throws DegenerateError when the polyline has zero length.
ParamVector chord_length_params(std::span<const Point2> points);

/// Least-squares Bezier fit with the first and last control points pinned to
/// points.front() and points.back(). Only the interior control points are
/// solved for.
///
/// The normal equations are solved by Cholesky while their condition number
/// stays below 1e12; beyond that the reduced design matrix is solved through
/// its SVD pseudo-inverse. A numerically rank-deficient design matrix (for
/// example repeated interior parameters) raises RankDeficientError.
BezierCurve fit_curve(std::span<const Point2> points, const ParamVector& ts, int order);

struct FitResidual {
  double max = 0.0;
  double rms = 0.0;
};

/// Max and RMS of |c(ts[k]) - points[k]| over all k.
FitResidual fit_residual(const BezierCurve& curve, std::span<const Point2> points,
                         const ParamVector& ts);

/// Drops every point that coincides exactly with its predecessor.
std::vector<Point2> merge_coincident(std::span<const Point2> points);

/// Degree elevation: the same geometric curve expressed with order
/// `target_order` >= curve.order().
BezierCurve elevate_order(const BezierCurve& curve, int target_order);

}  // namespace abcnet
