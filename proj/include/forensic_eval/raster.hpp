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

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fe {

// Row-major bit-per-pixel plane. Bits are packed into 64-bit words over the
// flat pixel index; the padding bits of the last word are always zero.
class BitPlane {
 public:
  BitPlane() = default;
  BitPlane(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  bool test(std::size_t index) const noexcept {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void set(std::size_t index, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (index & 63);
    if (value) {
      words_[index >> 6] |= bit;
    } else {
      words_[index >> 6] &= ~bit;
    }
  }
  bool test(int x, int y) const noexcept { return test(flat(x, y)); }
  void set(int x, int y, bool value) noexcept { set(flat(x, y), value); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  // Mask of meaningful bits in the last word.
  std::uint64_t tail_mask() const noexcept;
  std::size_t popcount() const noexcept;
  bool same_dims(const BitPlane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const BitPlane&, const BitPlane&) = default;

 protected:
  void invert_in_place() noexcept;

 private:
  std::size_t flat(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> words_;
};

// Ground truth or binarized prediction; 1 = manipulated.
class BinaryMask : public BitPlane {
 public:
  using BitPlane::BitPlane;

  BinaryMask complement() const;
  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

// Valid-region marker after padding or cropping; 1 = counted.
class ShapeMask : public BitPlane {
 public:
  using BitPlane::BitPlane;

  static ShapeMask all_valid(int width, int height) { return ShapeMask(width, height, true); }
  friend bool operator==(const ShapeMask&, const ShapeMask&) = default;
};

// Per-pixel manipulation probability. Values are validated into [0,1] and
// negative zero is folded to +0 so float bit patterns order like the values.
class ScoreMap {
 public:
  ScoreMap() = default;
  ScoreMap(int width, int height, float fill = 0.0f);
  ScoreMap(int width, int height, std::vector<float> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  float at(std::size_t index) const noexcept { return values_[index]; }
  float at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  // Throws fe::Error on NaN or values outside [0,1].
  void set(std::size_t index, float value);
  void set(int x, int y, float value) {
    set(static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x),
        value);
  }

  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const ScoreMap&, const ScoreMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

// Interleaved 8-bit raster with a compile-time channel count.
template <int Channels>
struct Raster {
  static_assert(Channels == 1 || Channels == 3);
  static constexpr int kChannels = Channels;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Raster() = default;
  Raster(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * Channels, fill) {}

  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width) * height; }
  std::uint8_t* pixel(int x, int y) noexcept {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * Channels;
  }
  const std::uint8_t* pixel(int x, int y) const noexcept {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * Channels;
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

using GrayImage = Raster<1>;
using RgbImage = Raster<3>;

// BT.601 luma with integer weights (299, 587, 114) / 1000, rounded.
constexpr std::uint32_t luma(std::uint32_t r, std::uint32_t g, std::uint32_t b) noexcept {
  return (299 * r + 587 * g + 114 * b + 500) / 1000;
}

GrayImage to_gray(const RgbImage& image);

// Pixel set iff score >= threshold.
BinaryMask binarize(const ScoreMap& scores, double threshold);

ScoreMap to_scores(const BinaryMask& mask);

}  // namespace fe
