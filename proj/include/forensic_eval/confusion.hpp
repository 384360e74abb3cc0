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

// Integer confusion counts over the valid pixels of one image (or a sum of
// images). All pixel-level metrics reduce through this type.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  std::uint64_t positives() const noexcept { return tp + fn; }  // ground-truth support
  std::uint64_t negatives() const noexcept { return tn + fp; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept {
    return a += b;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Counts after complementing the prediction: tp<->fn, tn<->fp.
constexpr ConfusionCounts complement_prediction(const ConfusionCounts& c) noexcept {
  return {c.fn, c.fp, c.tn, c.tp};
}

// Counts after complementing the ground truth: tp<->fp, tn<->fn.
constexpr ConfusionCounts complement_truth(const ConfusionCounts& c) noexcept {
  return {c.fp, c.fn, c.tp, c.tn};
}

// Bit-parallel confusion counts. Throws DimensionError on mismatched planes.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, const ShapeMask& shape);

struct MaskPairView {
  const BinaryMask& pred;
  const BinaryMask& gt;
  const ShapeMask* shape = nullptr;  // null: every pixel valid
};

// One ConfusionCounts per pair, in input order, independent of `workers`.
// A failing pair is reported as a BatchError carrying its index.
std::vector<ConfusionCounts> confusion_batch(std::span<const MaskPairView> pairs, int workers = 0);

}  // namespace fe
