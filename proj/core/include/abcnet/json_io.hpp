// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abcnet/attn_decoder.hpp"
#include "abcnet/codec.hpp"
#include "abcnet/gt_gen.hpp"

namespace abcnet {

using Json = nlohmann::json;

/// One entry of a Bezier JSON document:
///   { "order": n, "top": [[x, y] x (n+1)], "bottom": [[x, y] x (n+1)],
///     "transcript": "...", "score": s }
/// "transcript" and "score" are optional; score marks a detection.
struct BezierRecord {
  BezierBBox bbox;
  std::string transcript;
  std::optional<double> score;
};

/// Annotation documents are a list of
///   { "points": [[x, y], ...], "transcript": "...", "language": "en" | "zh" | null }.
/// Validation errors name the offending position, e.g. "[3].points[2]".
std::vector<PolygonAnnotation> annotations_from_json(const Json& doc);
Json annotations_to_json(const std::vector<PolygonAnnotation>& annotations);

std::vector<BezierRecord> bezier_records_from_json(const Json& doc);
Json bezier_records_to_json(const std::vector<BezierRecord>& records);

/// { "order": n, "x_min": x, "y_min": y, "deltas": [[dx, dy], ...] }
Json regression_target_to_json(const RegressionTarget& target, int order);
RegressionTarget regression_target_from_json(const Json& doc, int& order);

/// Parses a file; FormatError on invalid JSON, IoError when unreadable.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented dump with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// Decoder weights are stored one TNSR file per named tensor next to a
/// manifest:
///   { "tensors": [ { "name": "attn.k", "shape": [A], "file": "attn.k.tnsr" }, ... ] }
/// File paths are relative to the manifest's directory.
DecoderParams load_decoder_params(const std::filesystem::path& manifest);
void save_decoder_params(const std::filesystem::path& directory, const DecoderParams& params);

}  // namespace abcnet
