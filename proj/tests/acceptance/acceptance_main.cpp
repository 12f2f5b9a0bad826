// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "abcnet/aet.hpp"
#include "abcnet/align.hpp"
#include "abcnet/attn_decoder.hpp"
#include "abcnet/bezier.hpp"
#include "abcnet/codec.hpp"
#include "abcnet/gt_gen.hpp"
#include "abcnet/image_io.hpp"
#include "abcnet/json_io.hpp"
#include "abcnet/quant.hpp"
#include "abcnet/tensor_io.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace {

using namespace abcnet;
using testing::Rng;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain, counter-clockwise without collinear points.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - a.x - s * dx, p.y - a.y - s * dy);
}

// Distance from p to the hull, zero inside.
double hull_distance(const std::vector<Point2>& hull, Point2 p) {
  if (hull.size() == 1) return std::hypot(p.x - hull[0].x, p.y - hull[0].y);
  if (hull.size() == 2) return segment_distance(p, hull[0], hull[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i], b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < 0) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

// ---- 1

Outcome bezier_math_suite() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst_unity = 0.0, worst_affine = 0.0, worst_hull = 0.0;
  bool endpoints = true;
  for (int order = 1; order <= 5; ++order) {
    for (int trial = 0; trial < 10000; ++trial) {
      const auto cp = testing::random_control_points(rng, order, -100, 100);
      const BezierCurve curve(cp);
      endpoints = endpoints && eval_curve(curve, 0.0) == cp.front() &&
                  eval_curve(curve, 1.0) == cp.back();
      const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2),
                   d = rng.uniform(-2, 2);
      const Point2 shift = rng.point(-100, 100);
      auto affine = [&](Point2 p) { return Point2{a * p.x + b * p.y + shift.x, c * p.x + d * p.y + shift.y}; };
      std::vector<Point2> mapped;
      for (const Point2& p : cp) mapped.push_back(affine(p));
      const BezierCurve image(mapped);
      const auto hull = convex_hull(cp);
      for (int k = 0; k < 4; ++k) {
        const double t = rng.uniform(0, 1);
        double unity = 0.0;
        for (int i = 0; i <= order; ++i) unity += bernstein(i, order, t);
        worst_unity = std::max(worst_unity, std::abs(unity - 1.0));
        const Point2 p = eval_curve(curve, t);
        const Point2 q = eval_curve(image, t);
        const Point2 ap = affine(p);
        worst_affine = std::max({worst_affine, std::abs(q.x - ap.x), std::abs(q.y - ap.y)});
        worst_hull = std::max(worst_hull, hull_distance(hull, p));
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = worst_unity <= 1e-12 && endpoints && worst_affine <= 1e-9 && worst_hull <= 1e-9 &&
             elapsed < 5.0;
  out.detail = fmt("unity %.1e, affine %.1e, hull %.1e", worst_unity, worst_affine, worst_hull) +
               (endpoints ? ", endpoints bit-exact" : ", endpoint mismatch") +
               fmt(", %.2f s", elapsed);
  return out;
}

// ---- 2

Outcome gt_fidelity() {
  const auto start = Clock::now();
  Rng rng(1002);
  double worst_residual = 0.0, worst_control = 0.0, worst_noisy_rms = 0.0;
  for (int fixture = 0; fixture < 200; ++fixture) {
    const testing::BandFixture band = testing::make_band(rng, fixture % 2 ? 7 : 5);
    const BezierBBox bbox = polygon_to_bbox(band.annotation, 3);
    const PolygonSides sides = split_polygon(band.annotation);
    worst_residual = std::max({worst_residual, side_residual(sides.top, bbox.top()).max,
                               side_residual(sides.bottom, bbox.bottom()).max});
    for (int i = 0; i <= 3; ++i) {
      worst_control = std::max({worst_control, distance(bbox.top()[i], band.top.control[i]),
                                distance(bbox.bottom()[i], band.bottom.control[i])});
    }
    PolygonAnnotation noisy = band.annotation;
    for (Point2& p : noisy.points) p = p + Point2{rng.normal(0, 0.5), rng.normal(0, 0.5)};
    const BezierBBox noisy_bbox = polygon_to_bbox(noisy, 3);
    const PolygonSides noisy_sides = split_polygon(noisy);
    worst_noisy_rms = std::max({worst_noisy_rms, side_residual(noisy_sides.top, noisy_bbox.top()).rms,
                                side_residual(noisy_sides.bottom, noisy_bbox.bottom()).rms});
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = worst_residual < 1e-6 && worst_noisy_rms < 1.0 && elapsed < 10.0;
  out.detail = fmt("exact max residual %.1e px (control points within %.1e px), ", worst_residual,
                   worst_control) +
               fmt("noisy worst rms %.3f px, %.2f s", worst_noisy_rms, elapsed);
  return out;
}

// ---- 3

Outcome order_ablation() {
  Rng rng(1003);
  const int fixtures = 100;
  const std::size_t per_side = 12;
  int better = 0;
  for (int f = 0; f < fixtures; ++f) {
    const double width = rng.uniform(240, 400), x0 = rng.uniform(20, 60), y0 = rng.uniform(60, 120);
    const double amplitude = rng.uniform(6, 16), phase = rng.uniform(0, 2 * M_PI);
    PolygonAnnotation ann;
    std::vector<Point2> bottom;
    for (std::size_t k = 0; k < per_side; ++k) {
      const double s = static_cast<double>(k) / (per_side - 1);
      const double x = x0 + width * s;
      const double y = y0 + amplitude * std::sin(phase + 6 * M_PI * s);
      ann.points.push_back({x, y});
      bottom.push_back({x, y + 64});
    }
    ann.points.insert(ann.points.end(), bottom.rbegin(), bottom.rend());
    const PolygonSides sides = split_polygon(ann);
    const BezierBBox third = polygon_to_bbox(ann, 3);
    const BezierBBox fourth = polygon_to_bbox(ann, 4);
    const double rms3 = side_residual(sides.top, third.top()).rms +
                        side_residual(sides.bottom, third.bottom()).rms;
    const double rms4 = side_residual(sides.top, fourth.top()).rms +
                        side_residual(sides.bottom, fourth.bottom()).rms;
    if (rms4 < rms3) ++better;
  }
  Outcome out;
  out.pass = better >= 95;
  out.detail = fmt("order 4 strictly better on %.0f/%.0f three-crest bands", better, fixtures);
  return out;
}

// ---- 4

Outcome align_equivalence() {
  Rng rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t channels = static_cast<std::size_t>(rng.integer(1, 3));
    const std::size_t h = static_cast<std::size_t>(rng.integer(4, 24));
    const std::size_t w = static_cast<std::size_t>(rng.integer(4, 32));
    const Tensor feat = testing::random_tensor(rng, {channels, h, w}, -1, 1);
    const int order = static_cast<int>(rng.integer(1, 5));
    const BezierBBox bbox = testing::random_bbox(rng, order, -3, static_cast<double>(std::max(h, w)) + 3);
    const SampleGrid grid{static_cast<std::size_t>(rng.integer(1, 12)),
                          static_cast<std::size_t>(rng.integer(1, 12)), rng.integer(0, 1) == 1};
    const double scale = std::array{0.25, 0.5, 1.0, 2.0}[rng.integer(0, 3)];
    const std::vector<Point2> top(bbox.top().control_points().begin(), bbox.top().control_points().end());
    const std::vector<Point2> bottom(bbox.bottom().control_points().begin(),
                                     bbox.bottom().control_points().end());
    const Tensor want =
        testing::ref_bezier_align(feat, top, bottom, grid.h_out, grid.w_out, grid.pixel_center, scale);
    const Tensor got = bezier_align(feat, bbox, grid, {scale, 1});
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  double straight = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Tensor feat = testing::random_tensor(rng, {2, 30, 40}, -1, 1);
    const double x0 = rng.uniform(0, 15), y0 = rng.uniform(0, 10);
    const double x1 = x0 + rng.uniform(2, 24), y1 = y0 + rng.uniform(2, 18);
    const SampleGrid grid{8, 16, rng.integer(0, 1) == 1};
    const Tensor a = bezier_align(feat, quad_to_bbox({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}), grid);
    const Tensor b = horizontal_align(feat, {x0, y0, x1, y1}, grid);
    for (std::size_t i = 0; i < a.size(); ++i) straight = std::max(straight, std::abs(a[i] - b[i]));
  }
  const SampleGrid defaults;
  Outcome out;
  out.pass = worst <= 1e-9 && straight <= 1e-6 && defaults.h_out == 32 && defaults.w_out == 8;
  out.detail = fmt("oracle max diff %.1e, straight-case diff %.1e, default grid %.0fx", worst, straight,
                   static_cast<double>(defaults.h_out)) +
               std::to_string(defaults.w_out);
  return out;
}

// ---- 5

struct ScratchDir {
  explicit ScratchDir(const std::string& name)
      : path(fs::temp_directory_path() / ("abcnet_acceptance_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string operator/(const std::string& file) const { return (path / file).string(); }
  fs::path path;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json record_json(const BezierBBox& bbox) {
  return bezier_records_to_json({BezierRecord{bbox, "band", std::nullopt}});
}

double centroid_variance(const Tensor& patch) {
  std::vector<double> centroids;
  for (std::size_t x = 0; x < patch.dim(2); ++x) {
    double mass = 0.0, moment = 0.0;
    for (std::size_t y = 0; y < patch.dim(1); ++y) {
      mass += patch.at(0, y, x);
      moment += patch.at(0, y, x) * static_cast<double>(y);
    }
    if (mass > 1e-6) centroids.push_back(moment / mass);
  }
  const double mean = std::accumulate(centroids.begin(), centroids.end(), 0.0) / centroids.size();
  double var = 0.0;
  for (double c : centroids) var += (c - mean) * (c - mean);
  return var / centroids.size();
}

Outcome rectify_demo() {
  ScratchDir dir("rectify");
  // x(t) is linear because the control abscissae are evenly spaced.
  const BezierCurve top({{40, 70}, {146.0 + 2.0 / 3.0, 10}, {253.0 + 1.0 / 3.0, 130}, {360, 60}});
  const BezierCurve bottom({{40, 118}, {146.0 + 2.0 / 3.0, 58}, {253.0 + 1.0 / 3.0, 178}, {360, 108}});
  const BezierBBox band(top, bottom);
  Tensor image({1, 200, 400});
  const double sigma = 3.0;
  for (std::size_t x = 40; x <= 360; ++x) {
    const double t = (static_cast<double>(x) - 40.0) / 320.0;
    const double mid = eval_curve(top, t).y + 24.0;
    for (std::size_t y = 0; y < 200; ++y) {
      const double d = static_cast<double>(y) - mid;
      image.at(0, y, x) = std::exp(-d * d / (2 * sigma * sigma));
    }
  }
  write_png(dir / "band.png", image);

  double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
  for (const Point2& p : bbox_to_polygon(band, 256)) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  write_json_file(dir / "curved.json", record_json(band));
  write_json_file(dir / "rect.json", record_json(quad_to_bbox({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}})));

  const CliRun curved = run_cli({"rectify", dir / "band.png", dir / "curved.json", dir / "curved.png",
                                 "--scale", "4", "--pixel-center"});
  const CliRun rect = run_cli({"rectify", dir / "band.png", dir / "rect.json", dir / "rect.png",
                               "--scale", "4", "--pixel-center"});
  Outcome out;
  if (curved.code != 0 || rect.code != 0) {
    out.pass = false;
    out.detail = "rectify failed: " + curved.err + rect.err;
    return out;
  }
  const double warped = centroid_variance(read_png(dir / "curved.png"));
  const double plain = centroid_variance(read_png(dir / "rect.png"));
  const double reduction = 1.0 - warped / plain;
  out.pass = reduction >= 0.8;
  out.detail = fmt("baseline-row variance %.3f (warped) vs %.1f (unwarped crop), reduction %.1f%%", warped,
                   plain, 100 * reduction);
  return out;
}

// ---- 6

Outcome codec_exactness() {
  Rng rng(1006);
  auto lattice = [&] { return std::ldexp(static_cast<double>(rng.integer(-(1 << 28), 1 << 28)), -16); };
  int roundtrip_fail = 0, translate_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int order = static_cast<int>(rng.integer(1, 5));
    std::vector<Point2> t, b;
    for (int i = 0; i <= order; ++i) {
      t.push_back({lattice(), lattice()});
      b.push_back({lattice(), lattice()});
    }
    const BezierBBox bbox{BezierCurve(t), BezierCurve(b)};
    const RegressionTarget target = encode_targets(bbox);
    if (!(decode_targets(target, order) == bbox)) ++roundtrip_fail;
    const Point2 shift{lattice(), lattice()};
    const RegressionTarget moved = encode_targets(translate(bbox, shift));
    if (moved.deltas != target.deltas || moved.x_min != target.x_min + shift.x ||
        moved.y_min != target.y_min + shift.y) {
      ++translate_fail;
    }
  }
  Outcome out;
  out.pass = roundtrip_fail == 0 && translate_fail == 0;
  out.detail = fmt("1000 bboxes on the 2^-16 grid: %.0f roundtrip and %.0f translation mismatches",
                   roundtrip_fail, translate_fail);
  return out;
}

// ---- 7

BezierBBox integer_bbox(Rng& rng) {
  std::vector<Point2> t, b;
  for (int i = 0; i <= 3; ++i) {
    t.push_back({static_cast<double>(rng.integer(0, 20)), static_cast<double>(rng.integer(0, 20))});
    b.push_back({static_cast<double>(rng.integer(0, 20)), static_cast<double>(rng.integer(0, 20))});
  }
  return {BezierCurve(t), BezierCurve(b)};
}

Outcome aet_and_nms() {
  Rng rng(1007);
  int assign_fail = 0;
  for (int instance = 0; instance < 500; ++instance) {
    std::vector<BezierBBox> det_boxes, gt_boxes;
    std::vector<Detection> dets;
    std::vector<GroundTruth> gts;
    for (int i = 0; i < 50; ++i) {
      det_boxes.push_back(integer_bbox(rng));
      dets.push_back({det_boxes.back(), 0.5});
      gt_boxes.push_back(integer_bbox(rng));
      gts.push_back({gt_boxes.back(), ""});
    }
    const auto want = testing::ref_assign(det_boxes, gt_boxes);
    const auto got = aet_assign(dets, gts);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].gt_index != want[i] || got[i].detection_index != i ||
          got[i].distance != control_point_distance(det_boxes[i], gt_boxes[want[i]])) {
        ++assign_fail;
        break;
      }
    }
  }
  int nms_fail = 0;
  const int nms_instances = 300;
  for (int instance = 0; instance < nms_instances; ++instance) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 10));
    std::vector<Detection> dets;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(0, 30), y = rng.uniform(0, 30);
      const double w = rng.uniform(4, 14), h = rng.uniform(4, 14);
      dets.push_back({quad_to_bbox({{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}}),
                      std::round(rng.uniform(0, 1) * 10) / 10});
    }
    std::vector<std::vector<double>> iou(n, std::vector<double>(n));
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(dets[i].score);
      for (std::size_t j = 0; j < n; ++j) iou[i][j] = polygon_iou(dets[i].bbox, dets[j].bbox);
    }
    const auto sets = testing::ref_nms_keep_sets(iou, scores, 0.3);
    if (sets.size() != 1 || sets.front() != nms_indices(dets, 0.3)) ++nms_fail;
  }
  Outcome out;
  out.pass = assign_fail == 0 && nms_fail == 0;
  out.detail = fmt("assignment mismatches %.0f/500, NMS keep-set mismatches %.0f/%.0f", assign_fail,
                   nms_fail, nms_instances);
  return out;
}

// ---- 8

Outcome decoder_checks() {
  Rng rng(1008);
  double softmax_err = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> logits(static_cast<std::size_t>(rng.integer(1, 200)));
    for (double& l : logits) l = rng.uniform(-1e4, 1e4);
    const auto p = softmax(logits);
    softmax_err = std::max(softmax_err, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
  }

  double hand_err = 0.0;
  {
    DecoderParams p = DecoderParams::zeros(1, 1, 1, 1, 2);
    p.attn_k[0] = 2.0;
    p.attn_w[0] = 1.0;
    p.attn_u[0] = 1.0;
    const Tensor feats({2, 1}, std::vector<double>{0.0, std::atanh(std::log(3.0) / 2.0)});
    const AttentionResult r = attention_step({0.0}, feats, p);
    hand_err = std::max({hand_err, std::abs(r.weights[0] - 0.25), std::abs(r.weights[1] - 0.75)});
  }
  {
    DecoderParams p = DecoderParams::zeros(1, 1, 1, 1, 2);
    p.embeddings.at(1, 0) = 0.5;
    p.gru.w_z = Tensor({1, 2}, std::vector<double>{0.2, -0.3});
    p.gru.w_r = Tensor({1, 2}, std::vector<double>{0.7, 0.1});
    p.gru.w_h = Tensor({1, 2}, std::vector<double>{-0.4, 0.9});
    p.gru.u_z[0] = 0.6;
    p.gru.u_r[0] = -0.8;
    p.gru.u_h[0] = 1.1;
    p.gru.b_z[0] = 0.05;
    p.gru.b_r[0] = -0.02;
    p.gru.b_h[0] = 0.3;
    const double e = 0.5, c = 1.5, h = -0.7;
    const double z = 1.0 / (1.0 + std::exp(-(0.2 * e - 0.3 * c + 0.6 * h + 0.05)));
    const double r = 1.0 / (1.0 + std::exp(-(0.7 * e + 0.1 * c - 0.8 * h - 0.02)));
    const double g = std::tanh(-0.4 * e + 0.9 * c + 1.1 * (r * h) + 0.3);
    hand_err = std::max(hand_err, std::abs(gru_step(1, {c}, {h}, p)[0] - ((1 - z) * h + z * g)));
    const auto zero = gru_step(0, {0.0}, {0.8}, DecoderParams::zeros(1, 1, 1, 1, 2));
    hand_err = std::max(hand_err, std::abs(zero[0] - 0.4));
  }
  {
    DecoderParams p = DecoderParams::zeros(1, 1, 1, 1, 2);
    p.v = Tensor({2, 1}, std::vector<double>{1.0, -1.0});
    const ClassifyResult r = classify_step({2.0}, p);
    const double want = 1.0 / (1.0 + std::exp(-4.0));
    hand_err = std::max({hand_err, std::abs(r.probs[0] - want), std::abs(r.probs[1] - (1 - want))});
  }

  bool deterministic = true;
  bool charsets = CharsetSpec(96).num_classes() == 96 && CharsetSpec(5462).num_classes() == 5462 &&
                  kEnglishClasses == 96 && kBilingualClasses == 5462;
  for (std::size_t classes : {std::size_t{96}, std::size_t{5462}}) {
    const CharsetSpec charset(classes);
    DecoderParams p = DecoderParams::zeros(4, 6, 5, 3, charset.output_size());
    for (Tensor* t : {&p.attn_k, &p.attn_w, &p.attn_u, &p.gru.w_z, &p.gru.w_h, &p.gru.u_r, &p.v,
                      &p.embeddings}) {
      for (double& v : t->data()) v = rng.uniform(-1, 1);
    }
    Tensor feats({7, 5});
    for (double& v : feats.data()) v = rng.uniform(-1, 1);
    DecodeOptions opts;
    opts.teacher = std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8};
    opts.teacher_prob = 0.5;
    opts.seed = 99;
    const DecodeResult a = decode_sequence(feats, p, charset, opts);
    const DecodeResult b = decode_sequence(feats, p, charset, opts);
    deterministic = deterministic && a.symbols == b.symbols && a.inputs == b.inputs;
    charsets = charsets && p.embeddings.dim(0) == classes + 2;
  }
  Outcome out;
  out.pass = softmax_err <= 1e-9 && hand_err <= 1e-12 && deterministic && charsets;
  out.detail = fmt("softmax sum error %.1e, hand examples %.1e", softmax_err, hand_err) +
               (deterministic ? ", deterministic" : ", NOT deterministic") +
               (charsets ? ", charsets 96/5462 accepted" : ", charset mismatch");
  return out;
}

// ---- 9

Outcome quant_checks() {
  Rng rng(1009);
  double worst_ratio = 0.0;
  for (int bits : {1, 2, 4, 8}) {
    const double alpha = 1.7;
    const QuantSpec spec{bits, alpha, alpha};
    const double bound = alpha / (2.0 * static_cast<double>(spec.levels() - 1));
    for (int i = 0; i < 1000000; ++i) {
      const double x = rng.uniform(-0.5 * alpha, 1.5 * alpha);
      const double err = std::abs(quant_act_value(x, spec).q - std::clamp(x, 0.0, alpha));
      worst_ratio = std::max(worst_ratio, err / bound);
    }
  }
  double matmul = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const QuantSpec spec{static_cast<int>(rng.integer(1, 8)), rng.uniform(0.5, 2), rng.uniform(0.5, 2)};
    const Tensor a = testing::random_tensor(rng, {8, 8}, -0.5, 2.5);
    const Tensor w = testing::random_tensor(rng, {8, 8}, -2.5, 2.5);
    matmul = std::max(matmul, int_matmul_check(a, w, spec).max_abs_diff);
  }
  const bool constants = memory_saving(4) == 8.0 && speedup_estimate(8) == 2.0;
  const bool hand = quant_act_value(0.6, {2, 1, 1}).q == 2.0 / 3.0 &&
                    quant_weight_value(-0.5, {2, 1, 1}).q == -1.0 / 3.0;
  Outcome out;
  out.pass = worst_ratio <= 1.0 && matmul <= 1e-9 && constants && hand;
  out.detail = fmt("worst error / bound %.6f over 4e6 samples, integer path diff %.1e", worst_ratio, matmul) +
               (constants ? ", 32/4 = 8 and INT8 speedup 2" : ", constant mismatch") +
               (hand ? ", hand examples exact" : ", hand example mismatch");
  return out;
}

// ---- 10

Outcome alpha_objective() {
  Rng rng(1010);
  std::vector<double> x(20000);
  for (double& v : x) v = std::abs(rng.normal(0, 1));
  std::vector<double> grid;
  for (int k = 1; k <= 80; ++k) grid.push_back(0.05 * k);
  const int bits = 3;
  const double best = search_alpha(x, bits, grid);
  const auto idx = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), best) - grid.begin());
  Outcome out;
  if (idx == 0 || idx + 1 >= grid.size()) {
    out.pass = false;
    out.detail = fmt("alpha %.2f lies on the grid boundary", best);
    return out;
  }
  auto err = [&](double alpha) { return quantization_error(x, {bits, alpha, alpha}); };
  const double left = err(grid[idx - 1]), mid = err(best), right = err(grid[idx + 1]);
  out.pass = mid < left && mid < right;
  out.detail = fmt("alpha* = %.2f, error %.2f below neighbours %.2f / ", best, mid, left) +
               fmt("%.2f", right);
  return out;
}

// ---- 11

std::string strip_wall_time(const std::string& report) {
  Json j = Json::parse(report);
  j.erase("wall_time_s");
  return j.dump();
}

Outcome cli_determinism() {
  ScratchDir dir("determinism");
  Rng rng(1011);
  const testing::BandFixture band = testing::make_band(rng, 7);
  write_json_file(dir / "ann.json", annotations_to_json({band.annotation}));

  Tensor image({3, 240, 480});
  for (double& v : image.data()) v = rng.uniform(0, 1);
  write_png(dir / "img.png", image);

  Json dets = Json::array(), gts = Json::array();
  for (int i = 0; i < 12; ++i) {
    const double x = rng.uniform(0, 40), y = rng.uniform(0, 40);
    const BezierBBox b = quad_to_bbox({{{x, y}, {x + 20, y}, {x + 20, y + 8}, {x, y + 8}}});
    Json d = bezier_records_to_json({BezierRecord{b, "", rng.uniform(0, 1)}})[0];
    dets.push_back(d);
    if (i % 3 == 0) gts.push_back(bezier_records_to_json({BezierRecord{b, "w" + std::to_string(i), std::nullopt}})[0]);
  }
  write_json_file(dir / "dets.json", dets);
  write_json_file(dir / "gts.json", gts);

  write_tensor(dir / "x.tnsr", testing::random_tensor(rng, {16, 16}, -1, 2));
  write_tensor(dir / "w.tnsr", testing::random_tensor(rng, {16, 8}, -1, 1));

  DecoderParams p = DecoderParams::zeros(4, 6, 5, 3, 97);
  for (Tensor* t : {&p.attn_k, &p.attn_w, &p.attn_u, &p.gru.w_z, &p.gru.w_h, &p.v, &p.embeddings}) {
    for (double& v : t->data()) v = static_cast<float>(rng.uniform(-1, 1));
  }
  save_decoder_params(dir.path / "weights", p);
  write_tensor(dir / "feats.tnsr", testing::random_tensor(rng, {9, 5}, -1, 1));

  struct Command {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> outputs;
  };
  auto commands = [&](const std::string& tag) {
    return std::vector<Command>{
        {"fit", {"fit", dir / "ann.json", dir / ("fit" + tag + ".json"), "--order", "4"}, {"fit" + tag + ".json"}},
        {"render", {"render", dir / "fit_ref.json", dir / ("r" + tag + ".svg"), "--annotations", dir / "ann.json"},
         {"r" + tag + ".svg"}},
        {"rectify", {"rectify", dir / "img.png", dir / "fit_ref.json", dir / ("p" + tag + ".png"), "--scale", "2",
                     "--pixel-center"}, {"p" + tag + ".png"}},
        {"codec", {"codec", dir / "fit_ref.json", "--out", dir / ("c" + tag + ".json"), "--roundtrip"},
         {"c" + tag + ".json"}},
        {"nms-assign", {"nms-assign", dir / "dets.json", dir / "gts.json", "--out", dir / ("n" + tag + ".json")},
         {"n" + tag + ".json"}},
        {"quant", {"quant", dir / "x.tnsr", "--bits", "4", "--alpha", "1.5", "--out", dir / ("q" + tag + ".tnsr"),
                   "--matmul-with", dir / "w.tnsr"}, {"q" + tag + ".tnsr"}},
        {"decode", {"decode", dir / "feats.tnsr", (dir.path / "weights" / "manifest.json").string(),
                    "--teacher", "1,2,3,4,5", "--teacher-prob", "0.5"}, {}},
    };
  };
  if (run_cli({"fit", dir / "ann.json", dir / "fit_ref.json", "--order", "4"}).code != 0) {
    return {false, "fit of the shared fixture failed"};
  }

  std::vector<std::string> failures;
  const std::vector<std::pair<std::string, std::string>> variants{{"1", "RUNA"}, {"1", "RUNB"}, {"8", "RUNC"}};
  std::vector<std::vector<std::string>> reports(variants.size());
  std::vector<std::vector<std::string>> files(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (const Command& cmd : commands(variants[v].second)) {
      std::vector<std::string> args{"--threads", variants[v].first, "--seed", "7"};
      args.insert(args.end(), cmd.args.begin(), cmd.args.end());
      const CliRun r = run_cli(args);
      if (r.code != 0) {
        failures.push_back(cmd.name + " exit " + std::to_string(r.code));
        reports[v].push_back("");
        files[v].push_back("");
        continue;
      }
      std::string report = strip_wall_time(r.out);
      // Output paths differ by tag only; compare with the tag removed.
      for (std::size_t pos; (pos = report.find(variants[v].second)) != std::string::npos;) {
        report.erase(pos, variants[v].second.size());
      }
      reports[v].push_back(report);
      std::string bytes;
      for (const std::string& f : cmd.outputs) bytes += read_file(dir / f);
      files[v].push_back(bytes);
    }
  }
  const auto names = commands("");
  for (std::size_t c = 0; c < names.size(); ++c) {
    for (std::size_t v = 1; v < variants.size(); ++v) {
      if (reports[v][c] != reports[0][c] || files[v][c] != files[0][c]) {
        failures.push_back(names[c].name + (v == 1 ? " (rerun)" : " (threads 8)"));
      }
    }
  }
  Outcome out;
  out.pass = failures.empty();
  if (failures.empty()) {
    out.detail = std::to_string(names.size()) + " commands identical across reruns and threads 1/8";
  } else {
    out.detail = "differences:";
    for (const auto& f : failures) out.detail += " " + f;
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bezier math invariants", bezier_math_suite},
      {"ground-truth fitting fidelity", gt_fidelity},
      {"order 4 vs order 3 on multi-wave bands", order_ablation},
      {"BezierAlign oracle equivalence", align_equivalence},
      {"rectification variance reduction", rectify_demo},
      {"codec exactness", codec_exactness},
      {"AET assignment and NMS", aet_and_nms},
      {"attention decoder", decoder_checks},
      {"quantization", quant_checks},
      {"clip value objective", alpha_objective},
      {"CLI determinism", cli_determinism},
  };
  const auto start = Clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  const double total = seconds_since(start);
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), total);
  return failed == 0 && total < 120.0 ? 0 : 1;
}
