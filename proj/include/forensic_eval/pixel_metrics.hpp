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

#pragma once

#include <optional>

#include "forensic_eval/confusion.hpp"
#include "forensic_eval/raster.hpp"

namespace fe {

// Binary F1 with the manipulated class positive: 2tp / (2tp + fp + fn).
// Every ratio below returns 1 when its denominator is zero (both sets empty
// means perfect agreement).
double f1_binary(const ConfusionCounts& c) noexcept;

// F1(G, P^C): binary F1 of the complemented prediction against the original
// ground truth, 2fn / (2fn + tn + tp).
double f1_invert(const ConfusionCounts& c) noexcept;

// F1 of the authentic class (both G and P complemented): 2tn / (2tn + fn + fp).
double f1_negative(const ConfusionCounts& c) noexcept;

// max(F1(G, P), F1(G, P^C)).
double f1_permute(const ConfusionCounts& c) noexcept;

// Two-class micro average; algebraically equal to accuracy.
double f1_micro(const ConfusionCounts& c) noexcept;

// Mean of the per-class F1 scores: (f1_binary + f1_negative) / 2.
double f1_macro(const ConfusionCounts& c) noexcept;

// Support-weighted per-class F1.
double f1_weighted(const ConfusionCounts& c) noexcept;

double iou(const ConfusionCounts& c) noexcept;

// (tp + tn) / total. Throws fe::Error when no pixel was counted.
double accuracy(const ConfusionCounts& c);

struct PixelMetricSet {
  double f1 = 0;
  double invert_f1 = 0;
  double permute_f1 = 0;
  double negative_f1 = 0;
  double macro_f1 = 0;
  double micro_f1 = 0;
  double weighted_f1 = 0;
  std::optional<double> auc;
  double accuracy = 0;
  double iou = 0;

  friend bool operator==(const PixelMetricSet&, const PixelMetricSet&) = default;
};

PixelMetricSet metrics_from_counts(const ConfusionCounts& c, std::optional<double> auc = {});

struct SampleEvaluation {
  ConfusionCounts counts;
  PixelMetricSet metrics;  // auc empty when the valid ground truth is single-class
};

// Thresholds `scores` at `threshold` (score >= threshold is manipulated) and
// computes every pixel metric over the valid region.
SampleEvaluation evaluate_sample(const ScoreMap& scores, const BinaryMask& gt,
                                 const ShapeMask* shape, double threshold, bool with_auc = true);

}  // namespace fe
