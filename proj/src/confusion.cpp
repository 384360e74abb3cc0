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

#include "forensic_eval/confusion.hpp"

#include <bit>
#include <string>

#include "forensic_eval/error.hpp"
#include "forensic_eval/parallel.hpp"

namespace fe {

namespace {

void require_same(const BitPlane& a, const BitPlane& b, const char* what) {
  if (!a.same_dims(b)) {
    throw DimensionError(std::string(what) + " dimensions " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " do not match " +
                         std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

inline std::uint64_t pop(std::uint64_t w) noexcept {
  return static_cast<std::uint64_t>(std::popcount(w));
}

// tn is derived from the valid count so padding bits never leak in.
ConfusionCounts count_words(std::span<const std::uint64_t> p, std::span<const std::uint64_t> g,
                            const std::uint64_t* s, std::uint64_t valid_total) {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  const std::size_t n = p.size();
  if (s == nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      tp += pop(p[i] & g[i]);
      fp += pop(p[i] & ~g[i]);
      fn += pop(~p[i] & g[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      tp += pop(p[i] & g[i] & s[i]);
      fp += pop(p[i] & ~g[i] & s[i]);
      fn += pop(~p[i] & g[i] & s[i]);
    }
  }
  return {tp, valid_total - tp - fp - fn, fp, fn};
}

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same(pred, gt, "prediction");
  return count_words(pred.words(), gt.words(), nullptr, pred.size());
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, const ShapeMask& shape) {
  require_same(pred, gt, "prediction");
  require_same(shape, gt, "shape mask");
  return count_words(pred.words(), gt.words(), shape.words().data(), shape.popcount());
}

std::vector<ConfusionCounts> confusion_batch(std::span<const MaskPairView> pairs, int workers) {
  std::vector<ConfusionCounts> out(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    const MaskPairView& pair = pairs[i];
    try {
      out[i] = pair.shape ? confusion(pair.pred, pair.gt, *pair.shape)
                          : confusion(pair.pred, pair.gt);
    } catch (const std::exception& e) {
      throw BatchError(i, e.what());
    }
  });
  return out;
}

}  // namespace fe
