// SPDX-License-Identifier: Apache-2.0
#include "abcnet/bezier.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

constexpr auto kBinomial = [] {
  std::array<std::array<std::int64_t, kMaxBezierOrder + 1>, kMaxBezierOrder + 1> table{};
  for (int n = 0; n <= kMaxBezierOrder; ++n) {
    table[n][0] = 1;
    for (int k = 1; k <= n; ++k) {
      table[n][k] = table[n - 1][k - 1] + (k <= n - 1 ? table[n - 1][k] : 0);
    }
  }
  return table;
}();

// Normal-equation condition number above which the SVD route is taken.
constexpr double kNormalConditionLimit = 1e12;
// Relative singular value below which a design column counts as dependent.
constexpr double kRankTolerance = 1e-12;

double bernstein_unchecked(int i, int n, double t) {
  return static_cast<double>(kBinomial[n][i]) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

void require_unit_interval(double t, const char* op) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(op) + ": t = " + std::to_string(t) + " outside [0, 1]");
  }
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::int64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxBezierOrder || k < 0 || k > n) {
    throw DomainError("binomial: C(" + std::to_string(n) + ", " + std::to_string(k) +
                      ") outside the supported table");
  }
  return kBinomial[n][k];
}

double bernstein(int i, int n, double t) {
  if (n < 0 || n > kMaxBezierOrder) {
    throw DomainError("bernstein: order " + std::to_string(n) + " unsupported");
  }
  if (i < 0 || i > n) {
    throw DomainError("bernstein: index " + std::to_string(i) + " outside [0, " +
                      std::to_string(n) + "]");
  }
  require_unit_interval(t, "bernstein");
  return bernstein_unchecked(i, n, t);
}

BezierCurve::BezierCurve(std::vector<Point2> control_points)
    : control_points_(std::move(control_points)) {
  const int n = order();
  if (n < 1 || n > kMaxBezierOrder) {
    throw DomainError("BezierCurve: order " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxBezierOrder) + "]");
  }
  for (const Point2& p : control_points_) {
    if (!is_finite(p)) throw DomainError("BezierCurve: non-finite control point");
  }
}

ParamVector::ParamVector(std::vector<double> ts) : ts_(std::move(ts)) {
  if (ts_.size() < 2) throw DomainError("ParamVector: needs at least two values");
  if (ts_.front() != 0.0 || ts_.back() != 1.0) {
    throw DomainError("ParamVector: must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < ts_.size(); ++k) {
    if (!(ts_[k] >= ts_[k - 1])) throw DomainError("ParamVector: values must be non-decreasing");
  }
}

Point2 eval_curve(const BezierCurve& curve, double t) {
  require_unit_interval(t, "eval_curve");
  if (t == 0.0) return curve.front();
  if (t == 1.0) return curve.back();
  const int n = curve.order();
  Point2 out;
  for (int i = 0; i <= n; ++i) {
    const double w = bernstein_unchecked(i, n, t);
    out.x += w * curve[i].x;
    out.y += w * curve[i].y;
  }
  return out;
}

ParamVector chord_length_params(std::span<const Point2> points) {
  if (points.size() < 2) throw DomainError("chord_length_params: needs at least two points");
  std::vector<double> cumulative(points.size(), 0.0);
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (!is_finite(points[k])) throw DomainError("chord_length_params: non-finite point");
    cumulative[k] = cumulative[k - 1] + distance(points[k - 1], points[k]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw DegenerateError("chord_length_params: polyline has zero length");
  for (double& c : cumulative) c /= total;
  cumulative.back() = 1.0;
  return ParamVector(std::move(cumulative));
}

BezierCurve fit_curve(std::span<const Point2> points, const ParamVector& ts, int order) {
  if (order < 1 || order > kMaxFitOrder) {
    throw DomainError("fit_curve: order " + std::to_string(order) + " outside [1, " +
                      std::to_string(kMaxFitOrder) + "]");
  }
  if (points.size() < static_cast<std::size_t>(order) + 1) {
    throw DomainError("fit_curve: " + std::to_string(points.size()) +
                      " points cannot determine an order-" + std::to_string(order) + " curve");
  }
  if (ts.size() != points.size()) {
    throw DimensionError("fit_curve: parameter count does not match point count");
  }
  for (const Point2& p : points) {
    if (!is_finite(p)) throw DomainError("fit_curve: non-finite point");
  }

  const Point2 first = points.front();
  const Point2 last = points.back();
  std::vector<Point2> control(static_cast<std::size_t>(order) + 1);
  control.front() = first;
  control.back() = last;

  const int unknowns = order - 1;
  if (unknowns == 0) return BezierCurve(std::move(control));

  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(rows, unknowns);
  Eigen::MatrixXd rhs(rows, 2);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double t = ts[static_cast<std::size_t>(r)];
    for (int i = 1; i < order; ++i) design(r, i - 1) = bernstein_unchecked(i, order, t);
    const double w0 = bernstein_unchecked(0, order, t);
    const double wn = bernstein_unchecked(order, order, t);
    const Point2& p = points[static_cast<std::size_t>(r)];
    rhs(r, 0) = p.x - w0 * first.x - wn * last.x;
    rhs(r, 1) = p.y - w0 * first.y - wn * last.y;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma(0);
  const double sigma_min = sigma(sigma.size() - 1);
  if (!(sigma_max > 0.0) || sigma_min <= kRankTolerance * sigma_max) {
    throw RankDeficientError("fit_curve: reduced design matrix is rank deficient (order " +
                             std::to_string(order) + ", " + std::to_string(points.size()) +
                             " points)");
  }

  Eigen::MatrixXd solution;
  const double ratio = sigma_max / sigma_min;
  if (ratio * ratio <= kNormalConditionLimit) {
    const Eigen::MatrixXd normal = design.transpose() * design;
    solution = normal.llt().solve(design.transpose() * rhs);
  } else {
    solution = svd.solve(rhs);
  }

  for (int i = 1; i < order; ++i) control[i] = {solution(i - 1, 0), solution(i - 1, 1)};
  return BezierCurve(std::move(control));
}

FitResidual fit_residual(const BezierCurve& curve, std::span<const Point2> points,
                         const ParamVector& ts) {
  if (ts.size() != points.size()) {
    throw DimensionError("fit_residual: parameter count does not match point count");
  }
  FitResidual out;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double d = distance(eval_curve(curve, ts[k]), points[k]);
    out.max = std::max(out.max, d);
    sum_sq += d * d;
  }
  out.rms = points.empty() ? 0.0 : std::sqrt(sum_sq / static_cast<double>(points.size()));
  return out;
}

std::vector<Point2> merge_coincident(std::span<const Point2> points) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const Point2& p : points) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

BezierCurve elevate_order(const BezierCurve& curve, int target_order) {
  if (target_order < curve.order() || target_order > kMaxBezierOrder) {
    throw DomainError("elevate_order: cannot move from order " + std::to_string(curve.order()) +
                      " to " + std::to_string(target_order));
  }
  std::vector<Point2> cp(curve.control_points().begin(), curve.control_points().end());
  while (static_cast<int>(cp.size()) - 1 < target_order) {
    const int n = static_cast<int>(cp.size()) - 1;
    std::vector<Point2> next(cp.size() + 1);
    next.front() = cp.front();
    next.back() = cp.back();
    for (int i = 1; i <= n; ++i) {
      const double a = static_cast<double>(i) / (n + 1);
      next[i] = a * cp[i - 1] + (1.0 - a) * cp[i];
    }
    cp = std::move(next);
  }
  return BezierCurve(std::move(cp));
}

}  // namespace abcnet
