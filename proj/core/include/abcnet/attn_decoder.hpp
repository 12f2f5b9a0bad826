// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abcnet/tensor.hpp"

namespace abcnet {

/// Character classes of the English recognizer, EOS excluded.
inline constexpr std::size_t kEnglishClasses = 96;
/// Character classes of the bilingual (Chinese + English) recognizer.
inline constexpr std::size_t kBilingualClasses = 5462;

/// Output vocabulary. Symbols 0..num_classes-1 are characters; EOS follows
/// them unless num_classes already counts it. BOS exists only as an extra
/// embedding row after the last output symbol.
class CharsetSpec {
 public:
  explicit CharsetSpec(std::size_t num_classes, bool includes_eos = false);

  std::size_t num_classes() const { return num_classes_; }
  bool includes_eos() const { return includes_eos_; }
  /// Classifier width, EOS included.
  std::size_t output_size() const { return includes_eos_ ? num_classes_ : num_classes_ + 1; }
  std::size_t eos() const { return output_size() - 1; }
  std::size_t bos_row() const { return output_size(); }
  std::size_t embedding_rows() const { return output_size() + 1; }

 private:
  std::size_t num_classes_;
  bool includes_eos_;
};

/// Standard gated recurrent unit over input x and state h:
///   z = sigmoid(Wz x + Uz h + bz)
///   r = sigmoid(Wr x + Ur h + br)
///   g = tanh(Wh x + Uh (r * h) + bh)
///   h' = (1 - z) * h + z * g
struct GruWeights {
  Tensor w_z, w_r, w_h;  // [hidden, input]
  Tensor u_z, u_r, u_h;  // [hidden, hidden]
  Tensor b_z, b_r, b_h;  // [hidden]
};

/// Recognition head parameters. Attention width A, hidden size H, feature
/// size F, embedding size E, output size O (EOS included).
struct DecoderParams {
  Tensor attn_k;      // [A]
  Tensor attn_w;      // [A, H]
  Tensor attn_u;      // [A, F]
  Tensor attn_b;      // [A]
  GruWeights gru;     // input size E + F
  Tensor v;           // [O, H], probability head
  Tensor cls_w;       // [O, H], linear classifier
  Tensor cls_b;       // [O]
  Tensor embeddings;  // [O + 1, E], last row is BOS

  std::size_t hidden_size() const { return attn_w.dim(1); }
  std::size_t feature_size() const { return attn_u.dim(1); }
  std::size_t embed_size() const { return embeddings.dim(1); }
  std::size_t output_size() const { return v.dim(0); }

  /// Throws DimensionError on inconsistent shapes, DomainError on non-finite
  /// values.
  void validate() const;
  void validate_shapes() const;

  /// All-zero parameters with consistent shapes.
  static DecoderParams zeros(std::size_t attn, std::size_t hidden, std::size_t feature,
                             std::size_t embed, std::size_t outputs);
};

/// Max-subtracted softmax.
std::vector<double> softmax(const std::vector<double>& logits);

struct AttentionResult {
  std::vector<double> weights;  // one per sequence position, sums to 1
  std::vector<double> context;  // [F]
};

/// e_s = K . tanh(W h_prev + U h_s + b), weights = softmax(e),
/// context = sum_s weights_s h_s. feats is [n, F].
AttentionResult attention_step(const std::vector<double>& h_prev, const Tensor& feats,
                               const DecoderParams& params);

/// One GRU update fed with the concatenation (embedding of prev_symbol, context).
std::vector<double> gru_step(std::size_t prev_symbol, const std::vector<double>& context,
                             const std::vector<double>& h_prev, const DecoderParams& params);

struct ClassifyResult {
  std::vector<double> logits;  // cls_w h + cls_b
  std::vector<double> probs;   // softmax(V h)
};

ClassifyResult classify_step(const std::vector<double>& h, const DecoderParams& params);

struct DecodeOptions {
  std::size_t max_steps = 25;
  /// Ground-truth symbols, one per step, used as next inputs with
  /// probability teacher_prob.
  std::optional<std::vector<std::size_t>> teacher;
  double teacher_prob = 0.5;
  std::uint64_t seed = 0;
};

struct DecodeResult {
  std::vector<std::size_t> symbols;  // predictions before EOS
  std::vector<std::size_t> inputs;   // symbol fed at each step, starting with BOS
  bool hit_eos = false;
};

/// Greedy decoding from a zero state and the BOS embedding until EOS is the
/// most probable symbol or max_steps is reached.
DecodeResult decode_sequence(const Tensor& feats, const DecoderParams& params,
                             const CharsetSpec& charset, const DecodeOptions& options);

}  // namespace abcnet
