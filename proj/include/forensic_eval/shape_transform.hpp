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

#include "forensic_eval/raster.hpp"

namespace fe {

struct ShapePolicy {
  enum class Kind { pad_to, center_crop, resize };

  Kind kind = Kind::pad_to;
  int width = 0;
  int height = 0;

  static ShapePolicy pad_to(int w, int h) { return {Kind::pad_to, w, h}; }
  static ShapePolicy center_crop(int w, int h) { return {Kind::center_crop, w, h}; }
  static ShapePolicy resize(int w, int h) { return {Kind::resize, w, h}; }
};

template <typename Plane>
struct Shaped {
  Plane plane;
  ShapeMask shape;
};

// pad_to: source at top-left, new area zero and marked invalid.
// center_crop: window offset by (src - dst) / 2, all valid.
// resize: nearest-neighbour for masks, bilinear for scores, all valid.
// Throws DimensionError when the target is non-positive, when a crop exceeds
// the source, or when a pad target is smaller than the source.
Shaped<BinaryMask> apply_shape_transform(const BinaryMask& mask, const ShapePolicy& policy);
Shaped<ScoreMap> apply_shape_transform(const ScoreMap& scores, const ShapePolicy& policy);

// Source index sampled by nearest-neighbour resize: floor(dst * src / dst_size).
constexpr int nearest_source_index(int dst, int src_size, int dst_size) noexcept {
  return static_cast<int>(static_cast<long long>(dst) * src_size / dst_size);
}

BinaryMask resize_nearest(const BinaryMask& mask, int width, int height);
// Half-pixel-centre bilinear interpolation with edge clamping.
ScoreMap resize_bilinear(const ScoreMap& scores, int width, int height);
GrayImage resize_bilinear(const GrayImage& image, int width, int height);

}  // namespace fe
