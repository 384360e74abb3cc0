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

#include "forensic_eval/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forensic_eval/error.hpp"

namespace fe {

namespace {

void require_positive(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("plane dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
}

float checked_score(float value) {
  if (std::isnan(value) || value < 0.0f || value > 1.0f) {
    throw Error("score value " + std::to_string(value) + " outside [0,1]");
  }
  return value == 0.0f ? 0.0f : value;  // folds -0
}

}  // namespace

BitPlane::BitPlane(int width, int height, bool fill) : width_(width), height_(height) {
  require_positive(width, height);
  words_.assign((size() + 63) / 64, fill ? ~std::uint64_t{0} : 0);
  if (fill) words_.back() &= tail_mask();
}

std::uint64_t BitPlane::tail_mask() const noexcept {
  const std::size_t rem = size() & 63;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

std::size_t BitPlane::popcount() const noexcept {
  std::size_t total = 0;
  for (const std::uint64_t word : words_) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

void BitPlane::invert_in_place() noexcept {
  for (std::uint64_t& word : words_) word = ~word;
  if (!words_.empty()) words_.back() &= tail_mask();
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out = *this;
  out.invert_in_place();
  return out;
}

ScoreMap::ScoreMap(int width, int height, float fill)
    : width_(width), height_(height) {
  require_positive(width, height);
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 checked_score(fill));
}

ScoreMap::ScoreMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  require_positive(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("score plane holds " + std::to_string(values_.size()) +
                         " values for a " + std::to_string(width) + "x" +
                         std::to_string(height) + " grid");
  }
  for (float& v : values_) v = checked_score(v);
}

void ScoreMap::set(std::size_t index, float value) { values_[index] = checked_score(value); }

GrayImage to_gray(const RgbImage& image) {
  GrayImage out(image.width, image.height);
  const std::size_t n = image.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = image.data.data() + 3 * i;
    out.data[i] = static_cast<std::uint8_t>(luma(p[0], p[1], p[2]));
  }
  return out;
}

BinaryMask binarize(const ScoreMap& scores, double threshold) {
  BinaryMask out(scores.width(), scores.height());
  const auto values = scores.values();
  auto words = out.words();
  const float cut = static_cast<float>(threshold);
  // Compare in double when the threshold is not representable as float.
  const bool exact = static_cast<double>(cut) == threshold;
  const std::size_t n = values.size();
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::size_t base = w * 64;
    const std::size_t end = std::min<std::size_t>(64, n - base);
    std::uint64_t bits = 0;
    if (exact) {
      for (std::size_t b = 0; b < end; ++b) {
        bits |= static_cast<std::uint64_t>(values[base + b] >= cut) << b;
      }
    } else {
      for (std::size_t b = 0; b < end; ++b) {
        bits |= static_cast<std::uint64_t>(static_cast<double>(values[base + b]) >= threshold)
                << b;
      }
    }
    words[w] = bits;
  }
  return out;
}

ScoreMap to_scores(const BinaryMask& mask) {
  std::vector<float> values(mask.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = mask.test(i) ? 1.0f : 0.0f;
  return ScoreMap(mask.width(), mask.height(), std::move(values));
}

}  // namespace fe
