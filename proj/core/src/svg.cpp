// SPDX-License-Identifier: Apache-2.0
#include "abcnet/svg.hpp"

#include <cmath>
#include <cstdio>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

constexpr int kPolylineSamples = 64;

std::string num(double v) {
  if (!std::isfinite(v)) throw DomainError("svg: non-finite coordinate");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string style_attrs(const SvgStyle& s) {
  std::string out = " fill=\"" + escape(s.fill) + "\" stroke=\"" + escape(s.stroke) +
                    "\" stroke-width=\"" + num(s.stroke_width) + "\"";
  if (s.dash) out += " stroke-dasharray=\"" + escape(*s.dash) + "\"";
  return out;
}

std::string point_list(const std::vector<Point2>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ' ';
    out += num(points[i].x) + "," + num(points[i].y);
  }
  return out;
}

struct ElementWriter {
  std::string& out;

  void operator()(const SvgPolyline& e) const {
    out += std::string("    <") + (e.closed ? "polygon" : "polyline") + " points=\"" +
           point_list(e.points) + "\"" + style_attrs(e.style) + "/>\n";
  }
  void operator()(const SvgPath& e) const {
    out += "    <path d=\"" + e.d + "\"" + style_attrs(e.style) + "/>\n";
  }
  void operator()(const SvgCircle& e) const {
    out += "    <circle cx=\"" + num(e.center.x) + "\" cy=\"" + num(e.center.y) + "\" r=\"" +
           num(e.radius) + "\"" + style_attrs(e.style) + "/>\n";
  }
  void operator()(const SvgText& e) const {
    out += "    <text x=\"" + num(e.anchor.x) + "\" y=\"" + num(e.anchor.y) + "\" font-size=\"" +
           num(e.font_size) + "\" fill=\"" + escape(e.fill) + "\">" + escape(e.text) +
           "</text>\n";
  }
};

std::string curve_path(const BezierCurve& curve) {
  const auto cp = curve.control_points();
  std::string d = "M " + num(cp[0].x) + " " + num(cp[0].y);
  auto pt = [](Point2 p) { return " " + num(p.x) + " " + num(p.y); };
  switch (curve.order()) {
    case 1: return d + " L" + pt(cp[1]);
    case 2: return d + " Q" + pt(cp[1]) + pt(cp[2]);
    case 3: return d + " C" + pt(cp[1]) + pt(cp[2]) + pt(cp[3]);
    default:
      for (int k = 1; k <= kPolylineSamples; ++k) {
        const double t = k == kPolylineSamples ? 1.0 : static_cast<double>(k) / kPolylineSamples;
        d += " L" + pt(eval_curve(curve, t));
      }
      return d;
  }
}

}  // namespace

std::string SvgScene::to_string() const {
  if (!(width > 0.0) || !(height > 0.0)) throw DomainError("svg: canvas must be non-empty");
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  for (const auto& layer : layers) {
    out += "  <g>\n";
    for (const SvgElement& e : layer) std::visit(ElementWriter{out}, e);
    out += "  </g>\n";
  }
  out += "</svg>\n";
  return out;
}

SvgScene render_bezier_svg(const std::vector<BezierBBox>& bboxes,
                           const std::vector<std::vector<Point2>>& annotations, double width,
                           double height, const std::vector<std::string>& labels) {
  if (!(width > 0.0) || !(height > 0.0)) throw DomainError("render_bezier_svg: empty canvas");
  SvgScene scene{width, height, {}};

  std::vector<SvgElement> source;
  for (const auto& polygon : annotations) {
    source.push_back(SvgPolyline{polygon, true, {"#1f4fd8", "none", 1.0, std::nullopt}});
  }

  std::vector<SvgElement> curves;
  std::vector<SvgElement> controls;
  std::vector<SvgElement> points;
  std::vector<SvgElement> text;
  for (std::size_t i = 0; i < bboxes.size(); ++i) {
    for (const BezierCurve* c : {&bboxes[i].top(), &bboxes[i].bottom()}) {
      curves.push_back(SvgPath{curve_path(*c), {"#17a34a", "none", 2.0, std::nullopt}});
      std::vector<Point2> polygon(c->control_points().begin(), c->control_points().end());
      controls.push_back(SvgPolyline{polygon, false, {"#dc2626", "none", 1.0, "4 3"}});
      for (const Point2& p : polygon) {
        points.push_back(SvgCircle{p, 2.5, {"#7c3aed", "#7c3aed", 1.0, std::nullopt}});
      }
    }
    if (i < labels.size() && !labels[i].empty()) {
      const Point2 anchor = bboxes[i].top().front() - Point2{0.0, 4.0};
      text.push_back(SvgText{anchor, labels[i], 10.0, "black"});
    }
  }
  for (auto* layer : {&source, &curves, &controls, &points, &text}) {
    if (!layer->empty()) scene.layers.push_back(std::move(*layer));
  }
  return scene;
}

}  // namespace abcnet
