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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "forensic_eval/manifest.hpp"
#include "forensic_eval/raster.hpp"

namespace fe {

enum class TamperKind { copy_move, inpaint };

std::string_view tamper_name(TamperKind kind) noexcept;
TamperKind parse_tamper(std::string_view name);

struct TamperSpec {
  TamperKind kind = TamperKind::copy_move;
  // Tampered area as a fraction of min(W,H)^2; the square side is drawn
  // uniformly from [sqrt(area_min), sqrt(area_max)] * min(W,H).
  double area_min = 0.01;
  double area_max = 0.15;
  std::uint64_t seed = 0;

  // Throws fe::Error unless 0 < area_min <= area_max < 1.
  void validate() const;
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(int px, int py) const noexcept {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Tampered {
  RgbImage image;
  BinaryMask mask;            // exactly `region`
  Rect region;                // modified rectangle
  std::optional<Rect> source; // copy-move only
};

// Images below this size on either side are rejected as too small.
inline constexpr int kMinTamperSide = 4;

// Copies a square from a random source to a different random destination
// (contents taken from the unmodified image). Seeded by derive_seed(seed, id).
Tampered copy_move(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id);

// Fills a random square with the per-channel mean of its one-pixel border
// ring (clipped to the image), rounded half up.
Tampered inpaint(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id);

Tampered tamper(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id);

// Deterministic textured base image: per-channel gradients plus seeded noise.
RgbImage generate_base_image(int width, int height, std::uint64_t seed, std::string_view sample_id);

std::string synthetic_id(std::size_t index);

struct SyntheticSample {
  std::string id;
  RgbImage image;
  BinaryMask mask;
};

SyntheticSample synthesize_sample(std::size_t index, int width, int height, const TamperSpec& spec);

// Writes images/, masks/, manifest.json and preds/{perfect,empty,complement}/
// under out_dir. Returns the manifest (base_dir = out_dir).
Manifest build_test_corpus(std::size_t count, int width, int height, const TamperSpec& spec,
                           const std::filesystem::path& out_dir, int workers = 0);

}  // namespace fe
