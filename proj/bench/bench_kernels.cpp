// Copyright 2026 The forensic-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parallel kernels against the serial reference implementations.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "forensic_eval/cleanse.hpp"
#include "forensic_eval/confusion.hpp"
#include "forensic_eval/pixel_metrics.hpp"
#include "forensic_eval/reference.hpp"
#include "forensic_eval/roc.hpp"
#include "forensic_eval/ssim.hpp"

namespace {

constexpr int kSide = 512;

fe::BinaryMask make_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution bit(density);
  fe::BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, bit(rng));
  return m;
}

fe::ScoreMap make_scores(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> level(0, 255);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& s : v) s = static_cast<float>(level(rng)) / 255.0f;
  return fe::ScoreMap(w, h, std::move(v));
}

fe::GrayImage make_gray(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> pixel(0, 255);
  fe::GrayImage img(w, h);
  for (auto& p : img.data) p = static_cast<std::uint8_t>(pixel(rng));
  return img;
}

struct PixelPair {
  fe::ScoreMap scores;
  fe::BinaryMask gt;
  fe::BinaryMask pred;
};

const PixelPair& pixel_pair() {
  static const PixelPair pair = [] {
    std::mt19937_64 rng(1);
    PixelPair p{make_scores(rng, kSide, kSide), make_mask(rng, kSide, kSide, 0.1), {}};
    p.pred = fe::binarize(p.scores, 0.5);
    return p;
  }();
  return pair;
}

void BM_ConfusionBitPacked(benchmark::State& state) {
  const auto& p = pixel_pair();
  for (auto _ : state) benchmark::DoNotOptimize(fe::confusion(p.pred, p.gt));
  state.SetItemsProcessed(state.iterations() * kSide * kSide);
}
BENCHMARK(BM_ConfusionBitPacked);

void BM_ConfusionScalar(benchmark::State& state) {
  const auto& p = pixel_pair();
  for (auto _ : state) benchmark::DoNotOptimize(fe::reference::confusion_scalar(p.pred, p.gt));
  state.SetItemsProcessed(state.iterations() * kSide * kSide);
}
BENCHMARK(BM_ConfusionScalar);

void BM_AucRadix(benchmark::State& state) {
  const auto& p = pixel_pair();
  for (auto _ : state) benchmark::DoNotOptimize(fe::auc_pixel(p.scores, p.gt));
  state.SetItemsProcessed(state.iterations() * kSide * kSide);
}
BENCHMARK(BM_AucRadix);

void BM_AucSortedTrapezoid(benchmark::State& state) {
  const auto& p = pixel_pair();
  std::vector<std::uint8_t> labels(p.gt.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = p.gt.test(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fe::reference::auc_trapezoid_sorted(p.scores.values(), labels));
  }
  state.SetItemsProcessed(state.iterations() * kSide * kSide);
}
BENCHMARK(BM_AucSortedTrapezoid);

void BM_EvaluateSample(benchmark::State& state) {
  const auto& p = pixel_pair();
  for (auto _ : state) benchmark::DoNotOptimize(fe::evaluate_sample(p.scores, p.gt, nullptr, 0.5));
}
BENCHMARK(BM_EvaluateSample);

void BM_EvaluateSampleScalar(benchmark::State& state) {
  const auto& p = pixel_pair();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fe::reference::evaluate_sample_scalar(p.scores, p.gt, nullptr, 0.5));
  }
}
BENCHMARK(BM_EvaluateSampleScalar);

void BM_ConfusionBatch(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<fe::BinaryMask> preds, gts;
  for (int i = 0; i < 64; ++i) {
    preds.push_back(make_mask(rng, 256, 256, 0.5));
    gts.push_back(make_mask(rng, 256, 256, 0.1));
  }
  std::vector<fe::MaskPairView> pairs;
  for (std::size_t i = 0; i < preds.size(); ++i) pairs.push_back({preds[i], gts[i], nullptr});
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fe::confusion_batch(pairs, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pairs.size()));
}
BENCHMARK(BM_ConfusionBatch)->Arg(1)->Arg(2)->Arg(8);

void BM_SsimSeparable(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = make_gray(rng, 64, 64);
  const auto b = make_gray(rng, 64, 64);
  for (auto _ : state) benchmark::DoNotOptimize(fe::ssim(a, b));
}
BENCHMARK(BM_SsimSeparable);

void BM_SsimWindowed(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = make_gray(rng, 64, 64);
  const auto b = make_gray(rng, 64, 64);
  for (auto _ : state) benchmark::DoNotOptimize(fe::reference::ssim_windowed(a, b));
}
BENCHMARK(BM_SsimWindowed);

void BM_SimilarityMatrix(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<fe::GrayImage> images;
  for (int i = 0; i < 16; ++i) images.push_back(make_gray(rng, 128, 128));
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fe::similarity_matrix(images, 128, 128, workers));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(1)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
