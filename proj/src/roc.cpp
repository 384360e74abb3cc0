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

#include "forensic_eval/roc.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "forensic_eval/error.hpp"

namespace fe {

namespace {

// Sort key: the float's bit pattern (monotone for non-negative floats) shifted
// left by one, with the label in bit 0. Scores are <= 1.0f so keys fit in 31 bits.
inline std::uint32_t make_key(float score, bool positive) noexcept {
  std::uint32_t bits;
  std::memcpy(&bits, &score, sizeof bits);
  return (bits << 1) | static_cast<std::uint32_t>(positive);
}

inline float key_score(std::uint32_t key) noexcept {
  const std::uint32_t bits = key >> 1;
  float v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

// LSD radix sort, three 11-bit digits. Passes whose digit is constant are skipped.
void radix_sort(std::vector<std::uint32_t>& keys, std::vector<std::uint32_t>& scratch) {
  constexpr int kBits = 11;
  constexpr std::uint32_t kBuckets = 1u << kBits;
  const std::size_t n = keys.size();
  if (n < 256) {
    std::sort(keys.begin(), keys.end());
    return;
  }
  scratch.resize(n);
  std::array<std::array<std::uint32_t, kBuckets>, 3> hist{};
  for (const std::uint32_t k : keys) {
    ++hist[0][k & (kBuckets - 1)];
    ++hist[1][(k >> kBits) & (kBuckets - 1)];
    ++hist[2][k >> (2 * kBits)];
  }
  std::uint32_t* src = keys.data();
  std::uint32_t* dst = scratch.data();
  for (int pass = 0; pass < 3; ++pass) {
    auto& h = hist[static_cast<std::size_t>(pass)];
    const int shift = pass * kBits;
    if (h[(src[0] >> shift) & (kBuckets - 1)] == n) continue;
    std::uint32_t offset = 0;
    for (auto& count : h) {
      const std::uint32_t c = count;
      count = offset;
      offset += c;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t k = src[i];
      dst[h[(k >> shift) & (kBuckets - 1)]++] = k;
    }
    std::swap(src, dst);
  }
  if (src != keys.data()) std::memcpy(keys.data(), src, n * sizeof(std::uint32_t));
}

struct KeyBuffers {
  std::vector<std::uint32_t> keys;
  std::vector<std::uint32_t> scratch;
};

KeyBuffers& thread_buffers() {
  thread_local KeyBuffers buffers;
  return buffers;
}

// Integer trapezoid accumulation over sorted keys, walking thresholds from the
// highest score down. Each tie group contributes neg * (2 * tp_before + pos),
// i.e. twice the area of its trapezoid in units of 1 / (P * N).
double auc_sorted(std::span<const std::uint32_t> keys, std::uint64_t positives,
                  std::uint64_t negatives) {
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("AUC undefined: ground truth has a single class (" +
                               std::to_string(positives) + " positive, " +
                               std::to_string(negatives) + " negative)");
  }
  std::uint64_t tp = 0;
  std::uint64_t twice_area = 0;
  std::size_t i = keys.size();
  while (i > 0) {
    const std::uint32_t value = keys[i - 1] >> 1;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    while (i > 0 && (keys[i - 1] >> 1) == value) {
      if (keys[i - 1] & 1u) {
        ++pos;
      } else {
        ++neg;
      }
      --i;
    }
    twice_area += neg * (2 * tp + pos);
    tp += pos;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

float checked(float score) {
  if (!(score >= 0.0f && score <= 1.0f)) {
    throw Error("score " + std::to_string(score) + " outside [0,1]");
  }
  return score == 0.0f ? 0.0f : score;
}

void require_same(const ScoreMap& scores, const BitPlane& plane) {
  if (scores.width() != plane.width() || scores.height() != plane.height()) {
    throw DimensionError("score map " + std::to_string(scores.width()) + "x" +
                         std::to_string(scores.height()) + " does not match mask " +
                         std::to_string(plane.width()) + "x" + std::to_string(plane.height()));
  }
}

double auc_plane(const ScoreMap& scores, const BinaryMask& gt, const ShapeMask* shape) {
  require_same(scores, gt);
  if (shape) require_same(scores, *shape);
  KeyBuffers& buf = thread_buffers();
  auto& keys = buf.keys;
  keys.clear();
  keys.reserve(scores.size());
  const auto values = scores.values();
  const auto gt_words = gt.words();
  std::uint64_t positives = 0;
  for (std::size_t w = 0; w < gt_words.size(); ++w) {
    const std::size_t base = w * 64;
    const std::size_t end = std::min<std::size_t>(64, values.size() - base);
    const std::uint64_t labels = gt_words[w];
    const std::uint64_t valid = shape ? shape->words()[w] : ~std::uint64_t{0};
    if (valid == ~std::uint64_t{0}) {
      positives += static_cast<std::uint64_t>(std::popcount(labels));
      for (std::size_t b = 0; b < end; ++b) {
        keys.push_back(make_key(values[base + b], (labels >> b) & 1u));
      }
    } else {
      positives += static_cast<std::uint64_t>(std::popcount(labels & valid));
      for (std::size_t b = 0; b < end; ++b) {
        if ((valid >> b) & 1u) keys.push_back(make_key(values[base + b], (labels >> b) & 1u));
      }
    }
  }
  const std::uint64_t negatives = keys.size() - positives;
  radix_sort(keys, buf.scratch);
  return auc_sorted(keys, positives, negatives);
}

std::vector<std::uint32_t> sorted_keys(std::span<const float> scores,
                                       std::span<const std::uint8_t> labels,
                                       std::uint64_t& positives) {
  if (scores.size() != labels.size()) {
    throw DimensionError("score and label sequences differ in length");
  }
  std::vector<std::uint32_t> keys(scores.size());
  positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pos = labels[i] != 0;
    positives += pos;
    keys[i] = make_key(checked(scores[i]), pos);
  }
  std::vector<std::uint32_t> scratch;
  radix_sort(keys, scratch);
  return keys;
}

}  // namespace

double auc(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  std::uint64_t positives = 0;
  const auto keys = sorted_keys(scores, labels, positives);
  return auc_sorted(keys, positives, keys.size() - positives);
}

double auc_pixel(const ScoreMap& scores, const BinaryMask& gt) {
  return auc_plane(scores, gt, nullptr);
}

double auc_pixel(const ScoreMap& scores, const BinaryMask& gt, const ShapeMask& shape) {
  return auc_plane(scores, gt, &shape);
}

std::vector<RocPoint> roc_curve(std::span<const float> scores,
                                std::span<const std::uint8_t> labels) {
  std::uint64_t positives = 0;
  const auto keys = sorted_keys(scores, labels, positives);
  const std::uint64_t negatives = keys.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("ROC undefined: single-class labels");
  }
  std::vector<RocPoint> points;
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::size_t i = keys.size();
  while (i > 0) {
    const std::uint32_t value = keys[i - 1] >> 1;
    while (i > 0 && (keys[i - 1] >> 1) == value) {
      if (keys[i - 1] & 1u) {
        ++tp;
      } else {
        ++fp;
      }
      --i;
    }
    points.push_back({static_cast<double>(key_score(value << 1)),
                      static_cast<double>(tp) / static_cast<double>(positives),
                      static_cast<double>(fp) / static_cast<double>(negatives)});
  }
  return points;
}

}  // namespace fe
