// SPDX-License-Identifier: Apache-2.0
#include "abcnet/attn_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

void require_shape(const Tensor& t, const Shape& expected, const char* name) {
  if (t.shape() != expected) {
    throw DimensionError(std::string("decoder params: ") + name + " has shape " +
                         shape_to_string(t.shape()) + ", expected " + shape_to_string(expected));
  }
}

void require_length(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(n));
  }
}

// out += M x, with x of length cols == M.dim(1).
void add_matvec(const Tensor& m, const double* x, std::size_t cols, std::vector<double>& out) {
  const std::size_t stride = m.dim(1);
  for (std::size_t r = 0; r < m.dim(0); ++r) {
    const double* row = m.data().data() + r * stride;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] += acc;
  }
}

std::vector<double> as_vector(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

CharsetSpec::CharsetSpec(std::size_t num_classes, bool includes_eos)
    : num_classes_(num_classes), includes_eos_(includes_eos) {
  if (num_classes == 0 || (includes_eos && num_classes < 2)) {
    throw DomainError("CharsetSpec: need at least one character class");
  }
}

void DecoderParams::validate() const {
  validate_shapes();
  for (const Tensor* t : {&attn_k, &attn_w, &attn_u, &attn_b, &gru.w_z, &gru.w_r, &gru.w_h,
                          &gru.u_z, &gru.u_r, &gru.u_h, &gru.b_z, &gru.b_r, &gru.b_h, &v, &cls_w,
                          &cls_b, &embeddings}) {
    require_finite(*t, "decoder params");
  }
}

void DecoderParams::validate_shapes() const {
  if (attn_w.rank() != 2 || attn_u.rank() != 2 || embeddings.rank() != 2 || v.rank() != 2) {
    throw DimensionError("decoder params: attn_w, attn_u, v and embeddings must be matrices");
  }
  const std::size_t a = attn_w.dim(0);
  const std::size_t h = hidden_size();
  const std::size_t f = feature_size();
  const std::size_t e = embed_size();
  const std::size_t o = output_size();
  require_shape(attn_k, {a}, "attn_k");
  require_shape(attn_u, {a, f}, "attn_u");
  require_shape(attn_b, {a}, "attn_b");
  for (const Tensor* w : {&gru.w_z, &gru.w_r, &gru.w_h}) require_shape(*w, {h, e + f}, "gru.w");
  for (const Tensor* u : {&gru.u_z, &gru.u_r, &gru.u_h}) require_shape(*u, {h, h}, "gru.u");
  for (const Tensor* b : {&gru.b_z, &gru.b_r, &gru.b_h}) require_shape(*b, {h}, "gru.b");
  require_shape(v, {o, h}, "v");
  require_shape(cls_w, {o, h}, "cls_w");
  require_shape(cls_b, {o}, "cls_b");
  require_shape(embeddings, {o + 1, e}, "embeddings");
}

DecoderParams DecoderParams::zeros(std::size_t attn, std::size_t hidden, std::size_t feature,
                                   std::size_t embed, std::size_t outputs) {
  DecoderParams p;
  p.attn_k = Tensor({attn});
  p.attn_w = Tensor({attn, hidden});
  p.attn_u = Tensor({attn, feature});
  p.attn_b = Tensor({attn});
  for (Tensor* w : {&p.gru.w_z, &p.gru.w_r, &p.gru.w_h}) *w = Tensor({hidden, embed + feature});
  for (Tensor* u : {&p.gru.u_z, &p.gru.u_r, &p.gru.u_h}) *u = Tensor({hidden, hidden});
  for (Tensor* b : {&p.gru.b_z, &p.gru.b_r, &p.gru.b_h}) *b = Tensor({hidden});
  p.v = Tensor({outputs, hidden});
  p.cls_w = Tensor({outputs, hidden});
  p.cls_b = Tensor({outputs});
  p.embeddings = Tensor({outputs + 1, embed});
  return p;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw DimensionError("softmax: empty input");
  if (std::any_of(logits.begin(), logits.end(), [](double v) { return std::isnan(v); })) {
    throw DomainError("softmax: NaN logit");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

AttentionResult attention_step(const std::vector<double>& h_prev, const Tensor& feats,
                               const DecoderParams& params) {
  params.validate_shapes();
  require_rank(feats, 2, "attention_step");
  const std::size_t steps = feats.dim(0);
  const std::size_t f = params.feature_size();
  if (feats.dim(1) != f) {
    throw DimensionError("attention_step: feature width " + std::to_string(feats.dim(1)) +
                         ", expected " + std::to_string(f));
  }
  require_length(h_prev, params.hidden_size(), "attention_step: hidden state");

  const std::size_t a = params.attn_k.size();
  std::vector<double> query = as_vector(params.attn_b);
  add_matvec(params.attn_w, h_prev.data(), h_prev.size(), query);

  std::vector<double> energies(steps);
  std::vector<double> hidden(a);
  for (std::size_t s = 0; s < steps; ++s) {
    hidden = query;
    add_matvec(params.attn_u, feats.data().data() + s * f, f, hidden);
    double e = 0.0;
    for (std::size_t k = 0; k < a; ++k) e += params.attn_k[k] * std::tanh(hidden[k]);
    energies[s] = e;
  }

  AttentionResult result;
  result.weights = softmax(energies);
  result.context.assign(f, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t c = 0; c < f; ++c) result.context[c] += result.weights[s] * feats.at(s, c);
  }
  return result;
}

std::vector<double> gru_step(std::size_t prev_symbol, const std::vector<double>& context,
                             const std::vector<double>& h_prev, const DecoderParams& params) {
  params.validate_shapes();
  if (prev_symbol >= params.embeddings.dim(0)) {
    throw DomainError("gru_step: symbol " + std::to_string(prev_symbol) +
                      " has no embedding row");
  }
  const std::size_t h = params.hidden_size();
  const std::size_t e = params.embed_size();
  const std::size_t f = params.feature_size();
  require_length(context, f, "gru_step: context");
  require_length(h_prev, h, "gru_step: hidden state");

  std::vector<double> input(e + f);
  std::copy_n(params.embeddings.data().begin() + static_cast<std::ptrdiff_t>(prev_symbol * e), e,
              input.begin());
  std::copy(context.begin(), context.end(), input.begin() + static_cast<std::ptrdiff_t>(e));

  const GruWeights& g = params.gru;
  std::vector<double> z = as_vector(g.b_z);
  add_matvec(g.w_z, input.data(), input.size(), z);
  add_matvec(g.u_z, h_prev.data(), h, z);
  std::vector<double> r = as_vector(g.b_r);
  add_matvec(g.w_r, input.data(), input.size(), r);
  add_matvec(g.u_r, h_prev.data(), h, r);
  for (std::size_t i = 0; i < h; ++i) {
    z[i] = sigmoid(z[i]);
    r[i] = sigmoid(r[i]);
  }

  std::vector<double> gated(h);
  for (std::size_t i = 0; i < h; ++i) gated[i] = r[i] * h_prev[i];
  std::vector<double> candidate = as_vector(g.b_h);
  add_matvec(g.w_h, input.data(), input.size(), candidate);
  add_matvec(g.u_h, gated.data(), h, candidate);

  std::vector<double> next(h);
  for (std::size_t i = 0; i < h; ++i) {
    next[i] = (1.0 - z[i]) * h_prev[i] + z[i] * std::tanh(candidate[i]);
  }
  return next;
}

ClassifyResult classify_step(const std::vector<double>& h, const DecoderParams& params) {
  params.validate_shapes();
  require_length(h, params.hidden_size(), "classify_step: hidden state");
  ClassifyResult out;
  out.logits = as_vector(params.cls_b);
  add_matvec(params.cls_w, h.data(), h.size(), out.logits);
  std::vector<double> scores(params.output_size(), 0.0);
  add_matvec(params.v, h.data(), h.size(), scores);
  out.probs = softmax(scores);
  return out;
}

DecodeResult decode_sequence(const Tensor& feats, const DecoderParams& params,
                             const CharsetSpec& charset, const DecodeOptions& options) {
  params.validate();
  if (params.output_size() != charset.output_size()) {
    throw DimensionError("decode_sequence: classifier has " +
                         std::to_string(params.output_size()) + " outputs, charset needs " +
                         std::to_string(charset.output_size()));
  }
  if (options.max_steps == 0) throw DomainError("decode_sequence: max_steps must be >= 1");
  if (!(options.teacher_prob >= 0.0 && options.teacher_prob <= 1.0)) {
    throw DomainError("decode_sequence: teacher_prob outside [0, 1]");
  }
  if (options.teacher) {
    for (std::size_t sym : *options.teacher) {
      if (sym >= charset.output_size()) {
        throw DomainError("decode_sequence: teacher symbol " + std::to_string(sym) +
                          " outside the charset");
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  DecodeResult result;
  std::vector<double> hidden(params.hidden_size(), 0.0);
  std::size_t input = charset.bos_row();
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    result.inputs.push_back(input);
    const AttentionResult attn = attention_step(hidden, feats, params);
    hidden = gru_step(input, attn.context, hidden, params);
    const std::size_t predicted = argmax(classify_step(hidden, params).probs);
    if (predicted == charset.eos()) {
      result.hit_eos = true;
      break;
    }
    result.symbols.push_back(predicted);

    input = predicted;
    if (options.teacher && step < options.teacher->size() && uniform() < options.teacher_prob) {
      input = (*options.teacher)[step];
    }
  }
  return result;
}

}  // namespace abcnet
