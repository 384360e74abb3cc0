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

#include "forensic_eval/shape_transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "forensic_eval/error.hpp"

namespace fe {

namespace {

void require_target(const ShapePolicy& policy) {
  if (policy.width <= 0 || policy.height <= 0) {
    throw DimensionError("shape target must be positive, got " + std::to_string(policy.width) +
                         "x" + std::to_string(policy.height));
  }
}

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

// Bilinear sampling taps along one axis.
struct Tap {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap> bilinear_taps(int src_size, int dst_size) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst_size));
  const double scale = static_cast<double>(src_size) / dst_size;
  for (int d = 0; d < dst_size; ++d) {
    double pos = (d + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src_size - 1));
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, src_size - 1);
    taps[static_cast<std::size_t>(d)] = {lo, hi, pos - lo};
  }
  return taps;
}

template <typename Sample, typename Store>
void bilinear(int sw, int sh, int dw, int dh, Sample&& sample, Store&& store) {
  const auto xs = bilinear_taps(sw, dw);
  const auto ys = bilinear_taps(sh, dh);
  for (int y = 0; y < dh; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < dw; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      const double top = sample(tx.lo, ty.lo) * (1.0 - tx.frac) + sample(tx.hi, ty.lo) * tx.frac;
      const double bottom = sample(tx.lo, ty.hi) * (1.0 - tx.frac) + sample(tx.hi, ty.hi) * tx.frac;
      store(x, y, top * (1.0 - ty.frac) + bottom * ty.frac);
    }
  }
}

template <typename Plane, typename Copy>
Shaped<Plane> pad_or_crop(const Plane& src, const ShapePolicy& policy, Plane target, Copy&& copy) {
  const int sw = src.width();
  const int sh = src.height();
  if (policy.kind == ShapePolicy::Kind::pad_to) {
    if (policy.width < sw || policy.height < sh) {
      throw DimensionError("pad target " + dims(policy.width, policy.height) +
                           " smaller than source " + dims(sw, sh));
    }
    ShapeMask shape(policy.width, policy.height);
    for (int y = 0; y < sh; ++y) {
      for (int x = 0; x < sw; ++x) {
        copy(target, x, y, src, x, y);
        shape.set(x, y, true);
      }
    }
    return {std::move(target), std::move(shape)};
  }
  if (policy.width > sw || policy.height > sh) {
    throw DimensionError("crop " + dims(policy.width, policy.height) + " larger than source " +
                         dims(sw, sh));
  }
  const int ox = (sw - policy.width) / 2;
  const int oy = (sh - policy.height) / 2;
  for (int y = 0; y < policy.height; ++y) {
    for (int x = 0; x < policy.width; ++x) copy(target, x, y, src, x + ox, y + oy);
  }
  return {std::move(target), ShapeMask::all_valid(policy.width, policy.height)};
}

}  // namespace

BinaryMask resize_nearest(const BinaryMask& mask, int width, int height) {
  BinaryMask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = nearest_source_index(y, mask.height(), height);
    for (int x = 0; x < width; ++x) {
      out.set(x, y, mask.test(nearest_source_index(x, mask.width(), width), sy));
    }
  }
  return out;
}

ScoreMap resize_bilinear(const ScoreMap& scores, int width, int height) {
  std::vector<float> values(static_cast<std::size_t>(width) * height);
  bilinear(
      scores.width(), scores.height(), width, height,
      [&](int x, int y) { return static_cast<double>(scores.at(x, y)); },
      [&](int x, int y, double v) {
        values[static_cast<std::size_t>(y) * width + x] =
            std::clamp(static_cast<float>(v), 0.0f, 1.0f);
      });
  return ScoreMap(width, height, std::move(values));
}

GrayImage resize_bilinear(const GrayImage& image, int width, int height) {
  if (width <= 0 || height <= 0) throw DimensionError("resize target must be positive");
  if (image.width == width && image.height == height) return image;
  GrayImage out(width, height);
  bilinear(
      image.width, image.height, width, height,
      [&](int x, int y) { return static_cast<double>(*image.pixel(x, y)); },
      [&](int x, int y, double v) {
        *out.pixel(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      });
  return out;
}

Shaped<BinaryMask> apply_shape_transform(const BinaryMask& mask, const ShapePolicy& policy) {
  require_target(policy);
  if (policy.kind == ShapePolicy::Kind::resize) {
    return {resize_nearest(mask, policy.width, policy.height),
            ShapeMask::all_valid(policy.width, policy.height)};
  }
  return pad_or_crop(mask, policy, BinaryMask(policy.width, policy.height),
                     [](BinaryMask& dst, int dx, int dy, const BinaryMask& src, int sx, int sy) {
                       dst.set(dx, dy, src.test(sx, sy));
                     });
}

Shaped<ScoreMap> apply_shape_transform(const ScoreMap& scores, const ShapePolicy& policy) {
  require_target(policy);
  if (policy.kind == ShapePolicy::Kind::resize) {
    return {resize_bilinear(scores, policy.width, policy.height),
            ShapeMask::all_valid(policy.width, policy.height)};
  }
  return pad_or_crop(scores, policy, ScoreMap(policy.width, policy.height),
                     [](ScoreMap& dst, int dx, int dy, const ScoreMap& src, int sx, int sy) {
                       dst.set(dx, dy, src.at(sx, sy));
                     });
}

}  // namespace fe
