// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "abcnet/aet.hpp"
#include "abcnet/align.hpp"
#include "abcnet/attn_decoder.hpp"
#include "abcnet/bezier.hpp"
#include "abcnet/gt_gen.hpp"
#include "abcnet/quant.hpp"

namespace {

using namespace abcnet;

PolygonAnnotation wave_band(std::size_t per_side) {
  PolygonAnnotation ann;
  std::vector<Point2> bottom;
  for (std::size_t k = 0; k < per_side; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(per_side - 1);
    const double x = 20.0 + 360.0 * s;
    const double y = 80.0 + 12.0 * std::sin(6.0 * M_PI * s);
    ann.points.push_back({x, y});
    bottom.push_back({x, y + 64.0});
  }
  ann.points.insert(ann.points.end(), bottom.rbegin(), bottom.rend());
  return ann;
}

Tensor random_tensor(const Shape& shape, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor t(shape);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

void BM_Bernstein(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  int step = 0;
  for (auto _ : state) {
    const double t = step / 1000.0;
    for (int i = 0; i <= n; ++i) benchmark::DoNotOptimize(bernstein(i, n, t));
    step = step < 1000 ? step + 1 : 0;
  }
}
BENCHMARK(BM_Bernstein)->DenseRange(1, 5);

void BM_PolygonToBBox(benchmark::State& state) {
  const PolygonAnnotation ann = wave_band(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polygon_to_bbox(ann, 3));
}
BENCHMARK(BM_PolygonToBBox)->Arg(7)->Arg(14)->Arg(64);

void BM_BezierAlign(benchmark::State& state) {
  const Tensor feat = random_tensor({static_cast<std::size_t>(state.range(0)), 64, 128}, -1, 1, 1);
  const BezierBBox bbox = polygon_to_bbox(wave_band(7), 3);
  const AlignOptions options{0.25, static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(bezier_align(feat, bbox, SampleGrid{}, options));
}
BENCHMARK(BM_BezierAlign)->Args({16, 1})->Args({64, 1})->Args({64, 4});

void BM_PolygonIou(benchmark::State& state) {
  const BezierBBox a = polygon_to_bbox(wave_band(7), 3);
  const BezierBBox b = translate(a, {15.0, 10.0});
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(polygon_iou(a, b, samples));
}
BENCHMARK(BM_PolygonIou)->Arg(8)->Arg(16)->Arg(64);

void BM_QuantAct(benchmark::State& state) {
  const Tensor x = random_tensor({1 << 16}, -0.5, 2.0, 2);
  const QuantSpec spec{static_cast<int>(state.range(0)), 1.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(quant_act(x, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_QuantAct)->Arg(2)->Arg(4)->Arg(8);

void BM_IntMatmulCheck(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor a = random_tensor({n, n}, 0.0, 2.0, 3);
  const Tensor w = random_tensor({n, n}, -1.0, 1.0, 4);
  const QuantSpec spec{4, 1.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(int_matmul_check(a, w, spec));
}
BENCHMARK(BM_IntMatmulCheck)->Arg(8)->Arg(64);

void BM_DecodeSequence(benchmark::State& state) {
  const CharsetSpec charset(static_cast<std::size_t>(state.range(0)));
  DecoderParams p = DecoderParams::zeros(64, 128, 256, 64, charset.output_size());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  for (Tensor* t : {&p.attn_k, &p.attn_w, &p.attn_u, &p.gru.w_z, &p.gru.w_r, &p.gru.w_h, &p.gru.u_z,
                    &p.gru.u_r, &p.gru.u_h, &p.v, &p.embeddings}) {
    for (double& v : t->data()) v = dist(rng);
  }
  const Tensor feats = random_tensor({32, 256}, -1, 1, 6);
  DecodeOptions options;
  options.max_steps = 25;
  for (auto _ : state) benchmark::DoNotOptimize(decode_sequence(feats, p, charset, options));
}
BENCHMARK(BM_DecodeSequence)->Arg(kEnglishClasses)->Arg(kBilingualClasses)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
