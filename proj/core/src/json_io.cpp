// SPDX-License-Identifier: Apache-2.0
#include "abcnet/json_io.hpp"

#include <cmath>
#include <utility>

#include "abcnet/error.hpp"
#include "abcnet/tensor_io.hpp"

namespace abcnet {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

const Json& require_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing required field \"") + key + "\"");
  return *it;
}

double to_number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "expected a finite number");
  return d;
}

Point2 to_point(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected an [x, y] pair");
  return {to_number(v[0], where + "[0]"), to_number(v[1], where + "[1]")};
}

std::vector<Point2> to_points(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of [x, y] pairs");
  std::vector<Point2> points;
  points.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    points.push_back(to_point(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return points;
}

Json points_json(std::span<const Point2> points) {
  Json arr = Json::array();
  for (const Point2& p : points) arr.push_back({p.x, p.y});
  return arr;
}

std::string optional_string(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) fail(where + "." + key, "expected a string");
  return it->get<std::string>();
}

void require_list(const Json& doc, const char* what) {
  if (!doc.is_array()) fail("document", std::string("expected a top-level list of ") + what);
}

// Wraps domain errors raised while building geometry with the position.
template <typename Fn>
auto at_position(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

struct NamedTensor {
  const char* name;
  Tensor DecoderParams::*member = nullptr;
  Tensor GruWeights::*gru_member = nullptr;
};

constexpr NamedTensor kDecoderTensors[] = {
    {"attn.k", &DecoderParams::attn_k},
    {"attn.w", &DecoderParams::attn_w},
    {"attn.u", &DecoderParams::attn_u},
    {"attn.b", &DecoderParams::attn_b},
    {"gru.w_z", nullptr, &GruWeights::w_z},
    {"gru.w_r", nullptr, &GruWeights::w_r},
    {"gru.w_h", nullptr, &GruWeights::w_h},
    {"gru.u_z", nullptr, &GruWeights::u_z},
    {"gru.u_r", nullptr, &GruWeights::u_r},
    {"gru.u_h", nullptr, &GruWeights::u_h},
    {"gru.b_z", nullptr, &GruWeights::b_z},
    {"gru.b_r", nullptr, &GruWeights::b_r},
    {"gru.b_h", nullptr, &GruWeights::b_h},
    {"cls.v", &DecoderParams::v},
    {"cls.w", &DecoderParams::cls_w},
    {"cls.b", &DecoderParams::cls_b},
    {"embeddings", &DecoderParams::embeddings},
};

Tensor& member_of(DecoderParams& params, const NamedTensor& entry) {
  return entry.member ? params.*entry.member : params.gru.*entry.gru_member;
}

const Tensor& member_of(const DecoderParams& params, const NamedTensor& entry) {
  return entry.member ? params.*entry.member : params.gru.*entry.gru_member;
}

}  // namespace

std::vector<PolygonAnnotation> annotations_from_json(const Json& doc) {
  require_list(doc, "annotations");
  std::vector<PolygonAnnotation> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "[" + std::to_string(i) + "]";
    const Json& entry = doc[i];
    PolygonAnnotation ann;
    ann.points = to_points(require_field(entry, "points", where), where + ".points");
    ann.transcript = optional_string(entry, "transcript", where);
    const std::string language = optional_string(entry, "language", where);
    if (!language.empty()) ann.language = language;
    out.push_back(std::move(ann));
  }
  return out;
}

Json annotations_to_json(const std::vector<PolygonAnnotation>& annotations) {
  Json doc = Json::array();
  for (const PolygonAnnotation& ann : annotations) {
    Json entry;
    entry["points"] = points_json(ann.points);
    entry["transcript"] = ann.transcript;
    entry["language"] = ann.language ? Json(*ann.language) : Json(nullptr);
    doc.push_back(std::move(entry));
  }
  return doc;
}

std::vector<BezierRecord> bezier_records_from_json(const Json& doc) {
  require_list(doc, "Bezier boxes");
  std::vector<BezierRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "[" + std::to_string(i) + "]";
    const Json& entry = doc[i];
    const Json& order_field = require_field(entry, "order", where);
    if (!order_field.is_number_integer()) fail(where + ".order", "expected an integer");
    const int order = order_field.get<int>();
    std::vector<Point2> top = to_points(require_field(entry, "top", where), where + ".top");
    std::vector<Point2> bottom =
        to_points(require_field(entry, "bottom", where), where + ".bottom");
    const auto expected = static_cast<std::size_t>(order) + 1;
    if (order < 1 || top.size() != expected || bottom.size() != expected) {
      fail(where, "order " + std::to_string(order) + " needs " + std::to_string(expected) +
                      " control points per curve");
    }
    BezierBBox bbox = at_position(where, [&] {
      return BezierBBox(BezierCurve(std::move(top)), BezierCurve(std::move(bottom)));
    });
    std::optional<double> score;
    if (const auto it = entry.find("score"); it != entry.end() && !it->is_null()) {
      score = to_number(*it, where + ".score");
      if (*score < 0.0 || *score > 1.0) fail(where + ".score", "expected a value in [0, 1]");
    }
    out.push_back({std::move(bbox), optional_string(entry, "transcript", where), score});
  }
  return out;
}

Json bezier_records_to_json(const std::vector<BezierRecord>& records) {
  Json doc = Json::array();
  for (const BezierRecord& r : records) {
    Json entry;
    entry["order"] = r.bbox.order();
    entry["top"] = points_json(r.bbox.top().control_points());
    entry["bottom"] = points_json(r.bbox.bottom().control_points());
    entry["transcript"] = r.transcript;
    if (r.score) entry["score"] = *r.score;
    doc.push_back(std::move(entry));
  }
  return doc;
}

Json regression_target_to_json(const RegressionTarget& target, int order) {
  Json doc;
  doc["order"] = order;
  doc["x_min"] = target.x_min;
  doc["y_min"] = target.y_min;
  doc["deltas"] = points_json(target.deltas);
  return doc;
}

RegressionTarget regression_target_from_json(const Json& doc, int& order) {
  const Json& order_field = require_field(doc, "order", "target");
  if (!order_field.is_number_integer()) fail("target.order", "expected an integer");
  order = order_field.get<int>();
  RegressionTarget target;
  target.x_min = to_number(require_field(doc, "x_min", "target"), "target.x_min");
  target.y_min = to_number(require_field(doc, "y_min", "target"), "target.y_min");
  target.deltas = to_points(require_field(doc, "deltas", "target"), "target.deltas");
  return target;
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

DecoderParams load_decoder_params(const std::filesystem::path& manifest) {
  const Json doc = read_json_file(manifest);
  const Json& tensors = require_field(doc, "tensors", "manifest");
  if (!tensors.is_array()) fail("manifest.tensors", "expected a list");

  DecoderParams params;
  std::vector<bool> seen(std::size(kDecoderTensors), false);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::string where = "manifest.tensors[" + std::to_string(i) + "]";
    const Json& entry = tensors[i];
    const Json& name_field = require_field(entry, "name", where);
    const Json& file_field = require_field(entry, "file", where);
    const Json& shape_field = require_field(entry, "shape", where);
    if (!name_field.is_string() || !file_field.is_string() || !shape_field.is_array()) {
      fail(where, "expected string name, string file and shape list");
    }
    const std::string name = name_field.get<std::string>();
    std::size_t slot = std::size(kDecoderTensors);
    for (std::size_t k = 0; k < std::size(kDecoderTensors); ++k) {
      if (name == kDecoderTensors[k].name) slot = k;
    }
    if (slot == std::size(kDecoderTensors)) fail(where, "unknown tensor \"" + name + "\"");

    Shape declared;
    for (const Json& d : shape_field) {
      if (!d.is_number_unsigned()) fail(where + ".shape", "expected positive integers");
      declared.push_back(d.get<std::size_t>());
    }
    Tensor t = read_tensor(manifest.parent_path() / file_field.get<std::string>());
    if (t.shape() != declared) {
      fail(where, "file shape " + shape_to_string(t.shape()) + " differs from declared " +
                      shape_to_string(declared));
    }
    member_of(params, kDecoderTensors[slot]) = std::move(t);
    seen[slot] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) fail("manifest", std::string("missing tensor \"") + kDecoderTensors[k].name + "\"");
  }
  params.validate();
  return params;
}

void save_decoder_params(const std::filesystem::path& directory, const DecoderParams& params) {
  params.validate();
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
  Json manifest;
  manifest["tensors"] = Json::array();
  for (const NamedTensor& entry : kDecoderTensors) {
    const Tensor& t = member_of(params, entry);
    const std::string file = std::string(entry.name) + ".tnsr";
    write_tensor(directory / file, t);
    manifest["tensors"].push_back({{"name", entry.name}, {"shape", t.shape()}, {"file", file}});
  }
  write_json_file(directory / "manifest.json", manifest);
}

}  // namespace abcnet
