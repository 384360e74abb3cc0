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

#include <cstdint>
#include <span>
#include <vector>

#include "forensic_eval/raster.hpp"

namespace fe {

struct RocPoint {
  double threshold;  // predicted positive iff score >= threshold
  double tpr;
  double fpr;
};

// Area under the ROC curve by the trapezoid rule over one ROC point per
// distinct score value (ties share a point), anchored at (0,0) and (1,1).
// Accumulated in integers, so it equals the Mann-Whitney rank statistic
//   (#{pos > neg} + 0.5 * #{pos == neg}) / (P * N)
// up to the final division. labels: 1 = positive. Throws UndefinedMetricError
// when either class is absent.
double auc(std::span<const float> scores, std::span<const std::uint8_t> labels);

double auc_pixel(const ScoreMap& scores, const BinaryMask& gt);
double auc_pixel(const ScoreMap& scores, const BinaryMask& gt, const ShapeMask& shape);

// ROC points in decreasing-threshold order, starting at (0,0).
std::vector<RocPoint> roc_curve(std::span<const float> scores, std::span<const std::uint8_t> labels);

}  // namespace fe
