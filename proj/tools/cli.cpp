// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "abcnet/aet.hpp"
#include "abcnet/attn_decoder.hpp"
#include "abcnet/codec.hpp"
#include "abcnet/error.hpp"
#include "abcnet/gt_gen.hpp"
#include "abcnet/image_io.hpp"
#include "abcnet/json_io.hpp"
#include "abcnet/quant.hpp"
#include "abcnet/svg.hpp"
#include "abcnet/tensor_io.hpp"

namespace abcnet::cli {
namespace {

struct Globals {
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string log_level = "warn";
  std::string report;
};

struct Report {
  Json parameters = Json::object();
  Json items = Json::array();
  Json summary = Json::object();
};

using Logger = spdlog::logger;

std::string at(std::size_t i) { return "[" + std::to_string(i) + "]"; }

// Prefixes library errors raised for one input item with its position.
template <typename Fn>
auto for_item(std::size_t i, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), at(i) + ": " + e.what());
  }
}

Json residual_json(const FitResidual& r) { return {{"max", r.max}, {"rms", r.rms}}; }

std::vector<Point2> all_control_points(const BezierBBox& bbox) {
  std::vector<Point2> out(bbox.top().control_points().begin(), bbox.top().control_points().end());
  out.insert(out.end(), bbox.bottom().control_points().begin(),
             bbox.bottom().control_points().end());
  return out;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string input;
  std::string output;
  int order = 3;
};

Report cmd_fit(const FitArgs& a, const Globals&, Logger& log) {
  const auto annotations = annotations_from_json(read_json_file(a.input));
  if (a.order == 5) log.warn("order 5 tends to overfit annotation noise; 3 or 4 is recommended");
  log.info("fitting {} annotations at order {}", annotations.size(), a.order);

  Report r;
  r.parameters = {{"input", a.input}, {"output", a.output}, {"order", a.order}};
  std::vector<BezierRecord> records;
  double max_residual = 0.0;
  double rms_sum = 0.0;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const PolygonAnnotation& ann = annotations[i];
    const auto [bbox, top, bottom] = for_item(i, [&] {
      const BezierBBox fitted = polygon_to_bbox(ann, a.order);
      const PolygonSides sides = split_polygon(ann);
      return std::tuple{fitted, side_residual(sides.top, fitted.top()),
                        side_residual(sides.bottom, fitted.bottom())};
    });
    max_residual = std::max({max_residual, top.max, bottom.max});
    rms_sum += top.rms + bottom.rms;
    r.items.push_back({{"index", i},
                       {"transcript", ann.transcript},
                       {"top", residual_json(top)},
                       {"bottom", residual_json(bottom)}});
    records.push_back({bbox, ann.transcript, std::nullopt});
  }
  write_json_file(a.output, bezier_records_to_json(records));

  const double sides = 2.0 * static_cast<double>(records.size());
  r.summary = {{"count", records.size()},
               {"max_residual", max_residual},
               {"mean_rms", records.empty() ? 0.0 : rms_sum / sides}};
  return r;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string input;
  std::string output;
  std::string annotations;
  std::optional<double> width;
  std::optional<double> height;
};

Report cmd_render(const RenderArgs& a, const Globals&, Logger& log) {
  const auto records = bezier_records_from_json(read_json_file(a.input));
  std::vector<std::vector<Point2>> polygons;
  if (!a.annotations.empty()) {
    for (auto& ann : annotations_from_json(read_json_file(a.annotations))) {
      polygons.push_back(std::move(ann.points));
    }
  }

  double max_x = 0.0;
  double max_y = 0.0;
  std::vector<BezierBBox> bboxes;
  std::vector<std::string> labels;
  auto extend = [&](Point2 p) {
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  };
  for (const BezierRecord& rec : records) {
    bboxes.push_back(rec.bbox);
    labels.push_back(rec.transcript);
    for (const Point2& p : all_control_points(rec.bbox)) extend(p);
  }
  for (const auto& poly : polygons) {
    for (const Point2& p : poly) extend(p);
  }
  const double width = a.width.value_or(std::ceil(max_x) + 10.0);
  const double height = a.height.value_or(std::ceil(max_y) + 10.0);
  log.info("rendering {} boxes on a {}x{} canvas", bboxes.size(), width, height);

  const std::string svg = render_bezier_svg(bboxes, polygons, width, height, labels).to_string();
  write_file(a.output, svg);

  Report r;
  r.parameters = {{"input", a.input},
                  {"output", a.output},
                  {"annotations", a.annotations.empty() ? Json(nullptr) : Json(a.annotations)}};
  r.summary = {{"count", bboxes.size()},
               {"width", width},
               {"height", height},
               {"bytes", svg.size()}};
  return r;
}

// ---------------------------------------------------------------- rectify

struct RectifyArgs {
  std::string image;
  std::string boxes;
  std::string output;
  std::size_t h = 32;
  std::size_t w = 8;
  double scale = 1.0;
  bool pixel_center = false;
};

Report cmd_rectify(const RectifyArgs& a, const Globals& g, Logger& log) {
  const Tensor image = read_png(a.image);
  const auto records = bezier_records_from_json(read_json_file(a.boxes));
  if (records.empty()) throw DomainError("rectify: no boxes in " + a.boxes);

  const auto scaled = [&](std::size_t n) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * a.scale));
  };
  const SampleGrid grid{scaled(a.h), scaled(a.w), a.pixel_center};
  if (grid.h_out == 0 || grid.w_out == 0) throw DomainError("rectify: scaled grid is empty");
  const AlignOptions options{1.0, g.threads};
  log.info("rectifying {} boxes onto a {}x{} grid", records.size(), grid.h_out, grid.w_out);

  const std::size_t channels = image.dim(0);
  Tensor mosaic({channels, grid.h_out, grid.w_out * records.size()});
  Report r;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Tensor patch =
        for_item(i, [&] { return rectify_image(image, records[i].bbox, grid, options); });
    Json means = Json::array();
    for (std::size_t c = 0; c < channels; ++c) {
      double sum = 0.0;
      for (std::size_t y = 0; y < grid.h_out; ++y) {
        for (std::size_t x = 0; x < grid.w_out; ++x) {
          const double v = patch.at(c, y, x);
          mosaic.at(c, y, i * grid.w_out + x) = v;
          sum += v;
        }
      }
      means.push_back(sum / static_cast<double>(grid.h_out * grid.w_out));
    }
    r.items.push_back({{"index", i}, {"transcript", records[i].transcript}, {"mean", means}});
  }
  write_png(a.output, mosaic);

  r.parameters = {{"image", a.image},         {"boxes", a.boxes}, {"output", a.output},
                  {"h", a.h},                 {"w", a.w},         {"scale", a.scale},
                  {"pixel_center", a.pixel_center}};
  r.summary = {{"count", records.size()},
               {"grid", {grid.h_out, grid.w_out}},
               {"output_shape", mosaic.shape()}};
  return r;
}

// ---------------------------------------------------------------- codec

struct CodecArgs {
  std::string input;
  std::string output;
  bool roundtrip = false;
};

Report cmd_codec(const CodecArgs& a, const Globals&, Logger& log) {
  const auto records = bezier_records_from_json(read_json_file(a.input));
  log.info("encoding {} boxes", records.size());
  Report r;
  Json targets = Json::array();
  double max_error = 0.0;
  double max_magnitude = 1.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const BezierBBox& bbox = records[i].bbox;
    const RegressionTarget target = encode_targets(bbox);
    Json item = {{"index", i}, {"target", regression_target_to_json(target, bbox.order())}};
    if (a.roundtrip) {
      const BezierBBox back = decode_targets(target, bbox.order());
      const auto want = all_control_points(bbox);
      const auto got = all_control_points(back);
      double err = 0.0;
      for (std::size_t k = 0; k < want.size(); ++k) {
        err = std::max({err, std::abs(want[k].x - got[k].x), std::abs(want[k].y - got[k].y)});
        max_magnitude = std::max({max_magnitude, std::abs(want[k].x), std::abs(want[k].y)});
      }
      item["max_abs_error"] = err;
      max_error = std::max(max_error, err);
    }
    targets.push_back(item["target"]);
    r.items.push_back(std::move(item));
  }
  if (!a.output.empty()) write_json_file(a.output, targets);

  r.parameters = {{"input", a.input},
                  {"output", a.output.empty() ? Json(nullptr) : Json(a.output)},
                  {"roundtrip", a.roundtrip}};
  r.summary = {{"count", records.size()}};
  if (a.roundtrip) {
    r.summary["max_abs_error"] = max_error;
    r.summary["exact"] = max_error == 0.0;
    if (max_error > 1e-9 * max_magnitude) {
      throw Error(ErrorKind::Numeric, "codec: roundtrip error " + std::to_string(max_error) +
                                          " exceeds tolerance");
    }
  }
  return r;
}

// ---------------------------------------------------------------- nms-assign

struct NmsArgs {
  std::string detections;
  std::string truths;
  std::string output;
  double score_th = 0.5;
  double iou_th = 0.5;
};

Report cmd_nms_assign(const NmsArgs& a, const Globals&, Logger& log) {
  const auto det_records = bezier_records_from_json(read_json_file(a.detections));
  const auto gt_records = bezier_records_from_json(read_json_file(a.truths));

  std::vector<std::size_t> passing;
  std::vector<Detection> filtered;
  for (std::size_t i = 0; i < det_records.size(); ++i) {
    if (!det_records[i].score) {
      throw FormatError(a.detections + at(i) + ": detection is missing \"score\"");
    }
    if (*det_records[i].score >= a.score_th) {
      passing.push_back(i);
      filtered.push_back({det_records[i].bbox, *det_records[i].score});
    }
  }
  std::vector<GroundTruth> gts;
  for (const BezierRecord& rec : gt_records) gts.push_back({rec.bbox, rec.transcript});

  const std::vector<std::size_t> kept_local = nms_indices(filtered, a.iou_th);
  std::vector<Detection> kept;
  for (std::size_t k : kept_local) kept.push_back(filtered[k]);
  log.info("{} detections, {} above score, {} after NMS", det_records.size(), filtered.size(),
           kept.size());
  const std::vector<Assignment> assignments =
      kept.empty() ? std::vector<Assignment>{} : aet_assign(kept, gts);

  Report r;
  std::vector<BezierRecord> out_records;
  for (const Assignment& as : assignments) {
    const std::size_t original = passing[kept_local[as.detection_index]];
    r.items.push_back({{"detection", original},
                       {"score", kept[as.detection_index].score},
                       {"gt", as.gt_index},
                       {"distance", as.distance},
                       {"transcript", gts[as.gt_index].transcript}});
    out_records.push_back({kept[as.detection_index].bbox, gts[as.gt_index].transcript,
                           kept[as.detection_index].score});
  }
  if (!a.output.empty()) write_json_file(a.output, bezier_records_to_json(out_records));

  r.parameters = {{"detections", a.detections},
                  {"truths", a.truths},
                  {"output", a.output.empty() ? Json(nullptr) : Json(a.output)},
                  {"score_th", a.score_th},
                  {"iou_th", a.iou_th}};
  r.summary = {{"detections", det_records.size()},
               {"above_score", filtered.size()},
               {"kept", kept.size()},
               {"ground_truths", gts.size()}};
  return r;
}

// ---------------------------------------------------------------- quant

struct QuantArgs {
  std::string input;
  std::string output;
  std::string matmul_with;
  std::string energy_table;
  std::string throughput_table;
  int bits = 4;
  double alpha = 1.0;
  std::optional<double> alpha_w;
  bool weights = false;
};

EnergyTable load_energy_table(const std::string& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object()) throw FormatError(path + ": expected an object of operation costs");
  EnergyTable table;
  for (const auto& [name, cost] : doc.items()) {
    if (!cost.is_number()) throw FormatError(path + ": \"" + name + "\" must be a number");
    table[name] = cost.get<double>();
  }
  validate_energy_table(table);
  return table;
}

ThroughputTable load_throughput_table(const std::string& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object()) throw FormatError(path + ": expected an object keyed by bit width");
  ThroughputTable table;
  for (const auto& [key, ops] : doc.items()) {
    int bits = 0;
    try {
      std::size_t used = 0;
      bits = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw FormatError(path + ": key \"" + key + "\" is not a bit width");
    }
    if (!ops.is_number() || !(ops.get<double>() > 0.0) || !std::isfinite(ops.get<double>())) {
      throw FormatError(path + ": \"" + key + "\" must be a positive number");
    }
    table[bits] = ops.get<double>();
  }
  if (!table.contains(16)) throw FormatError(path + ": the 16-bit reference row is required");
  return table;
}

Report cmd_quant(const QuantArgs& a, const Globals&, Logger& log) {
  const Tensor x = read_tensor(a.input);
  QuantSpec spec{a.bits, a.alpha, a.alpha_w.value_or(a.alpha)};
  if (a.weights) spec.alpha_w = a.alpha;
  spec.validate();
  const EnergyTable energy =
      a.energy_table.empty() ? default_energy_table() : load_energy_table(a.energy_table);
  const ThroughputTable throughput = a.throughput_table.empty()
                                         ? default_throughput_table()
                                         : load_throughput_table(a.throughput_table);
  log.info("quantizing {} values at {} bits", x.size(), a.bits);

  const QuantResult res = a.weights ? quant_weight(x, spec) : quant_act(x, spec);
  const double lo = a.weights ? -a.alpha : 0.0;
  double sse = 0.0;
  double max_clip_error = 0.0;
  std::map<std::int64_t, std::size_t> histogram;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = res.q[i] - x[i];
    sse += d * d;
    max_clip_error = std::max(max_clip_error, std::abs(res.q[i] - std::clamp(x[i], lo, a.alpha)));
    ++histogram[res.z[i]];
  }
  const double step = (a.weights ? 2.0 : 1.0) * a.alpha / static_cast<double>(spec.levels() - 1);
  Json hist = Json::array();
  for (const auto& [level, count] : histogram) hist.push_back({{"level", level}, {"count", count}});
  if (!a.output.empty()) write_tensor(a.output, res.q);

  Report r;
  r.parameters = {{"input", a.input},
                  {"output", a.output.empty() ? Json(nullptr) : Json(a.output)},
                  {"bits", a.bits},
                  {"alpha", a.alpha},
                  {"weights", a.weights}};
  const auto speedup = throughput.contains(a.bits) ? Json(speedup_estimate(a.bits, throughput))
                                                   : Json(nullptr);
  r.summary = {{"count", x.size()},
               {"levels", spec.levels()},
               {"sse", sse},
               {"mse", sse / static_cast<double>(x.size())},
               {"max_clip_error", max_clip_error},
               {"error_bound", step / 2.0},
               {"histogram", hist},
               {"memory_saving", memory_saving(a.bits)},
               {"speedup", speedup}};

  if (!a.matmul_with.empty()) {
    const Tensor w = read_tensor(a.matmul_with);
    r.parameters["matmul_with"] = a.matmul_with;
    r.parameters["alpha_w"] = spec.alpha_w;
    const IntMatmulCheck check = int_matmul_check(x, w, spec);
    const double macs = static_cast<double>(x.dim(0) * x.dim(1) * w.dim(1));
    r.summary["matmul"] = {
        {"shape", check.int_path.shape()},
        {"max_abs_diff", check.max_abs_diff},
        {"energy_float_pj",
         energy_estimate({{"float_mult_32", macs}, {"float_add_32", macs}}, energy)},
        {"energy_fixed_pj",
         energy_estimate({{"fixed_mult_32", macs}, {"fixed_add_32", macs}}, energy)}};
  }
  return r;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string feats;
  std::string manifest;
  std::string charset = "en";
  std::size_t max_steps = 25;
  std::vector<std::size_t> teacher;
  double teacher_prob = 0.5;
};

Report cmd_decode(const DecodeArgs& a, const Globals& g, Logger& log) {
  const Tensor feats = read_tensor(a.feats);
  const DecoderParams params = load_decoder_params(a.manifest);
  const CharsetSpec charset(a.charset == "en" ? kEnglishClasses : kBilingualClasses);
  if (params.output_size() != charset.output_size()) {
    throw DimensionError("decode: parameters produce " + std::to_string(params.output_size()) +
                         " outputs but charset \"" + a.charset + "\" needs " +
                         std::to_string(charset.output_size()));
  }
  DecodeOptions options;
  options.max_steps = a.max_steps;
  options.seed = g.seed;
  options.teacher_prob = a.teacher_prob;
  if (!a.teacher.empty()) options.teacher = a.teacher;
  log.info("decoding {} feature vectors, seed {}", feats.dim(0), g.seed);

  const DecodeResult res = decode_sequence(feats, params, charset, options);
  Report r;
  r.parameters = {{"feats", a.feats},       {"manifest", a.manifest},
                  {"charset", a.charset},   {"max_steps", a.max_steps},
                  {"seed", g.seed},         {"teacher", a.teacher},
                  {"teacher_prob", a.teacher_prob}};
  r.summary = {{"symbols", res.symbols},
               {"inputs", res.inputs},
               {"hit_eos", res.hit_eos},
               {"steps", res.inputs.size()},
               {"eos", charset.eos()}};
  return r;
}

// ---------------------------------------------------------------- driver

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return kExitValidation;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::Numeric: return kExitNumeric;
  }
  return kExitInternal;
}

std::shared_ptr<Logger> make_logger(std::ostream& err, const std::string& level) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<Logger>("abcnet", sink);
  logger->set_pattern("abcnet: %l: %v");
  logger->set_level(spdlog::level::from_str(level));
  return logger;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bezier-curve text spotting toolkit", "abcnet"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads")
      ->envname("ABC_THREADS")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Seed for randomized steps")->envname("ABC_SEED");
  app.add_option("--log", g.log_level, "Log level")
      ->envname("ABC_LOG")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  app.add_option("--report", g.report, "Write the JSON report here instead of stdout");

  std::string command;
  std::function<Report(Logger&)> action;
  auto bind = [&](CLI::App* sub, auto& opts, auto fn) {
    sub->callback([&, sub, fn] {
      command = sub->get_name();
      action = [&, fn](Logger& log) { return fn(opts, g, log); };
    });
  };

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Convert polygon annotations to Bezier boxes");
  fit_cmd->add_option("input", fit.input, "Annotation JSON")->required();
  fit_cmd->add_option("output", fit.output, "Bezier JSON to write")->required();
  fit_cmd->add_option("--order", fit.order, "Curve order")
      ->check(CLI::IsMember({3, 4, 5}))
      ->capture_default_str();
  bind(fit_cmd, fit, cmd_fit);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw Bezier boxes as SVG");
  render_cmd->add_option("input", render.input, "Bezier JSON")->required();
  render_cmd->add_option("output", render.output, "SVG to write")->required();
  render_cmd->add_option("--annotations", render.annotations, "Source polygons to overlay");
  render_cmd->add_option("--width", render.width)->check(CLI::PositiveNumber);
  render_cmd->add_option("--height", render.height)->check(CLI::PositiveNumber);
  bind(render_cmd, render, cmd_render);

  RectifyArgs rectify;
  auto* rectify_cmd = app.add_subcommand("rectify", "Warp curved text regions to flat patches");
  rectify_cmd->set_help_flag("--help", "Print this help message and exit");
  rectify_cmd->add_option("image", rectify.image, "Input PNG")->required();
  rectify_cmd->add_option("boxes", rectify.boxes, "Bezier JSON")->required();
  rectify_cmd->add_option("output", rectify.output, "PNG with the patches side by side")
      ->required();
  rectify_cmd->add_option("--h", rectify.h, "Grid height")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rectify_cmd->add_option("--w", rectify.w, "Grid width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rectify_cmd->add_option("--scale", rectify.scale, "Grid size multiplier")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rectify_cmd->add_flag("--pixel-center", rectify.pixel_center, "Sample at cell centres");
  bind(rectify_cmd, rectify, cmd_rectify);

  CodecArgs codec;
  auto* codec_cmd = app.add_subcommand("codec", "Encode boxes as regression targets");
  codec_cmd->add_option("input", codec.input, "Bezier JSON")->required();
  codec_cmd->add_option("--out", codec.output, "Write the targets as JSON");
  codec_cmd->add_flag("--roundtrip", codec.roundtrip, "Decode again and check equality");
  bind(codec_cmd, codec, cmd_codec);

  NmsArgs nms;
  auto* nms_cmd = app.add_subcommand("nms-assign", "Filter, suppress and assign detections");
  nms_cmd->add_option("detections", nms.detections, "Bezier JSON with scores")->required();
  nms_cmd->add_option("truths", nms.truths, "Bezier JSON with transcripts")->required();
  nms_cmd->add_option("--out", nms.output, "Write assigned detections as Bezier JSON");
  nms_cmd->add_option("--score-th", nms.score_th)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  nms_cmd->add_option("--iou-th", nms.iou_th)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bind(nms_cmd, nms, cmd_nms_assign);

  QuantArgs quant;
  auto* quant_cmd = app.add_subcommand("quant", "Quantize a tensor and report the error");
  quant_cmd->add_option("input", quant.input, "TNSR file")->required();
  quant_cmd->add_option("--bits", quant.bits)->check(CLI::Range(1, 31))->capture_default_str();
  quant_cmd->add_option("--alpha", quant.alpha, "Clip value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  quant_cmd->add_flag("--weights", quant.weights, "Use the symmetric weight quantizer");
  quant_cmd->add_option("--out", quant.output, "Write the dequantized tensor");
  quant_cmd->add_option("--matmul-with", quant.matmul_with,
                        "Weight matrix for the integer product check");
  quant_cmd->add_option("--alpha-w", quant.alpha_w, "Clip value of the weight matrix")
      ->check(CLI::PositiveNumber);
  quant_cmd->add_option("--energy-table", quant.energy_table, "JSON operation costs in pJ");
  quant_cmd->add_option("--throughput-table", quant.throughput_table,
                        "JSON ops per cycle keyed by bit width");
  bind(quant_cmd, quant, cmd_quant);

  DecodeArgs decode;
  auto* decode_cmd = app.add_subcommand("decode", "Greedy attention decoding");
  decode_cmd->add_option("feats", decode.feats, "TNSR [n, F] sequence features")->required();
  decode_cmd->add_option("manifest", decode.manifest, "Parameter manifest JSON")->required();
  decode_cmd->add_option("--charset", decode.charset)
      ->check(CLI::IsMember({"en", "bilingual"}))
      ->capture_default_str();
  decode_cmd->add_option("--max-steps", decode.max_steps)
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}))
      ->capture_default_str();
  decode_cmd->add_option("--teacher", decode.teacher, "Comma-separated ground-truth symbols")
      ->delimiter(',');
  decode_cmd->add_option("--teacher-prob", decode.teacher_prob)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bind(decode_cmd, decode, cmd_decode);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  auto log = make_logger(err, g.log_level);
  try {
    const auto start = std::chrono::steady_clock::now();
    Report report = action(*log);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    Json doc = {{"command", command},
                {"parameters", std::move(report.parameters)},
                {"items", std::move(report.items)},
                {"summary", std::move(report.summary)},
                {"wall_time_s", elapsed.count()}};
    if (g.report.empty()) {
      out << doc.dump(2) << "\n";
    } else {
      write_json_file(g.report, doc);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "abcnet " << command << ": error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "abcnet " << command << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace abcnet::cli
