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

#include "forensic_eval/confusion.hpp"
#include "forensic_eval/pixel_metrics.hpp"
#include "forensic_eval/raster.hpp"

// Serial, straightforward implementations of the parallel kernels. They share
// no code with the optimized paths and exist to check and benchmark them.
namespace fe::reference {

// Per-pixel loop over (x, y).
ConfusionCounts confusion_scalar(const BinaryMask& pred, const BinaryMask& gt,
                                 const ShapeMask* shape = nullptr);

// Mann-Whitney statistic by enumerating every (positive, negative) pair.
// O(P * N); only for small inputs.
double auc_rank_pairs(std::span<const float> scores, std::span<const std::uint8_t> labels);

// std::sort by descending score, explicit ROC points, floating-point trapezoids.
double auc_trapezoid_sorted(std::span<const float> scores, std::span<const std::uint8_t> labels);

// Scalar pipeline: per-pixel threshold and count, then sorted-trapezoid AUC.
SampleEvaluation evaluate_sample_scalar(const ScoreMap& scores, const BinaryMask& gt,
                                        const ShapeMask* shape, double threshold);

// Direct 11x11 windowed sums at every valid position.
double ssim_windowed(const GrayImage& a, const GrayImage& b);

using BoolMatrix = std::vector<std::vector<bool>>;

// Warshall's algorithm: reach[i][j] |= reach[i][k] && reach[k][j].
BoolMatrix warshall_closure(BoolMatrix adjacency);

// Equivalence classes of the reflexive closure of a symmetric adjacency,
// ordered by first member with ascending members.
std::vector<std::vector<std::size_t>> closure_classes(const BoolMatrix& adjacency);

}  // namespace fe::reference
