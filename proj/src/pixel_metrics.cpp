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

#include "forensic_eval/pixel_metrics.hpp"

#include <algorithm>

#include "forensic_eval/error.hpp"
#include "forensic_eval/roc.hpp"

namespace fe {

namespace {

inline double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1_binary(const ConfusionCounts& c) noexcept {
  return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

double f1_invert(const ConfusionCounts& c) noexcept {
  return f1_binary(complement_prediction(c));
}

double f1_negative(const ConfusionCounts& c) noexcept {
  return ratio(2 * c.tn, 2 * c.tn + c.fn + c.fp);
}

double f1_permute(const ConfusionCounts& c) noexcept {
  return std::max(f1_binary(c), f1_invert(c));
}

double f1_micro(const ConfusionCounts& c) noexcept { return ratio(c.tp + c.tn, c.total()); }

double f1_macro(const ConfusionCounts& c) noexcept {
  return (f1_binary(c) + f1_negative(c)) / 2.0;
}

double f1_weighted(const ConfusionCounts& c) noexcept {
  const std::uint64_t total = c.total();
  if (total == 0) return 1.0;
  return (static_cast<double>(c.positives()) * f1_binary(c) +
          static_cast<double>(c.negatives()) * f1_negative(c)) /
         static_cast<double>(total);
}

double iou(const ConfusionCounts& c) noexcept { return ratio(c.tp, c.tp + c.fp + c.fn); }

double accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error("accuracy undefined: no valid pixels");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

PixelMetricSet metrics_from_counts(const ConfusionCounts& c, std::optional<double> auc) {
  PixelMetricSet m;
  m.f1 = f1_binary(c);
  m.invert_f1 = f1_invert(c);
  m.permute_f1 = std::max(m.f1, m.invert_f1);
  m.negative_f1 = f1_negative(c);
  m.macro_f1 = (m.f1 + m.negative_f1) / 2.0;
  m.micro_f1 = f1_micro(c);
  m.weighted_f1 = f1_weighted(c);
  m.auc = auc;
  m.accuracy = accuracy(c);
  m.iou = iou(c);
  return m;
}

SampleEvaluation evaluate_sample(const ScoreMap& scores, const BinaryMask& gt,
                                 const ShapeMask* shape, double threshold, bool with_auc) {
  const BinaryMask pred = binarize(scores, threshold);
  SampleEvaluation out;
  out.counts = shape ? confusion(pred, gt, *shape) : confusion(pred, gt);
  std::optional<double> area;
  if (with_auc && out.counts.positives() > 0 && out.counts.negatives() > 0) {
    area = shape ? auc_pixel(scores, gt, *shape) : auc_pixel(scores, gt);
  }
  out.metrics = metrics_from_counts(out.counts, area);
  return out;
}

}  // namespace fe
