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
#include <filesystem>
#include <span>
#include <vector>

#include "forensic_eval/raster.hpp"

namespace fe {

// Codec-neutral decoded image: 1 (gray) or 3 (RGB) channels, 8 or 16 bits per
// sample. Alpha and palettes are resolved at decode time.
struct DecodedImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // interleaved, row-major

  std::uint32_t max_value() const noexcept { return bit_depth == 16 ? 65535u : 255u; }
  // Luma (integer BT.601) of pixel i in the sample's native range.
  std::uint32_t intensity(std::size_t pixel) const noexcept;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// PNG or JPEG, detected from the leading magic bytes. Throws DecodeError.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);
DecodedImage decode_image_file(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const DecodedImage& image);
std::vector<std::uint8_t> encode_png(const GrayImage& image);
std::vector<std::uint8_t> encode_png(const RgbImage& image);
// 8-bit grayscale PNG with 0 / 255 pixels.
std::vector<std::uint8_t> encode_png(const BinaryMask& mask);

// Baseline JPEG, 4:2:0 chroma subsampling, islow DCT.
std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality);

GrayImage to_gray8(const DecodedImage& image);
RgbImage to_rgb8(const DecodedImage& image);

GrayImage read_gray(const std::filesystem::path& path);
RgbImage read_rgb(const std::filesystem::path& path);

// Pixel set iff luma / max >= threshold. threshold in (0,1).
BinaryMask mask_from_image(const DecodedImage& image, double threshold = 0.5);
BinaryMask decode_mask(std::span<const std::uint8_t> bytes, double threshold = 0.5);
BinaryMask decode_mask(const std::filesystem::path& path, double threshold = 0.5);

// Raw score file: u32le width, u32le height, then width*height f32le values.
ScoreMap decode_raw_scores(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_raw_scores(const ScoreMap& scores);

// Integer samples scaled by the type maximum; RGB is collapsed to luma.
ScoreMap scoremap_from_image(const DecodedImage& image);
// `.f32` files are raw scores, anything else is decoded as an image.
ScoreMap decode_scoremap(std::span<const std::uint8_t> bytes, bool raw);
ScoreMap decode_scoremap(const std::filesystem::path& path);

}  // namespace fe
