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

#include "forensic_eval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "forensic_eval/error.hpp"
#include "forensic_eval/image_io.hpp"
#include "forensic_eval/parallel.hpp"
#include "forensic_eval/rng.hpp"

namespace fe {

namespace fs = std::filesystem;

std::string_view tamper_name(TamperKind kind) noexcept {
  return kind == TamperKind::copy_move ? "copy_move" : "inpaint";
}

TamperKind parse_tamper(std::string_view name) {
  if (name == "copy_move" || name == "copy-move") return TamperKind::copy_move;
  if (name == "inpaint") return TamperKind::inpaint;
  throw Error("unknown tamper kind '" + std::string(name) + "'");
}

void TamperSpec::validate() const {
  if (!(area_min > 0.0 && area_min <= area_max && area_max < 1.0)) {
    throw Error("area fraction range must satisfy 0 < min <= max < 1");
  }
}

namespace {

void require_size(const RgbImage& image) {
  if (image.width < kMinTamperSide || image.height < kMinTamperSide) {
    throw DimensionError("image " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) + " too small to tamper (minimum " +
                         std::to_string(kMinTamperSide) + " per side)");
  }
}

// Square side; at most min(W,H) - 1 so every axis offers two positions and
// inpaint always has a non-empty border ring.
int draw_side(const RgbImage& image, const TamperSpec& spec, SeededRng& rng) {
  const int shortest = std::min(image.width, image.height);
  const double scale = rng.uniform(std::sqrt(spec.area_min), std::sqrt(spec.area_max));
  const int side = static_cast<int>(std::lround(scale * shortest));
  return std::clamp(side, 1, shortest - 1);
}

Rect draw_rect(const RgbImage& image, int side, SeededRng& rng) {
  return {static_cast<int>(rng.between(0, image.width - side)),
          static_cast<int>(rng.between(0, image.height - side)), side, side};
}

BinaryMask rect_mask(int width, int height, const Rect& r) {
  BinaryMask mask(width, height);
  for (int y = r.y; y < r.y + r.height; ++y) {
    for (int x = r.x; x < r.x + r.width; ++x) mask.set(x, y, true);
  }
  return mask;
}

}  // namespace

Tampered copy_move(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id) {
  spec.validate();
  require_size(image);
  SeededRng rng(derive_seed(spec.seed, sample_id));
  const int side = draw_side(image, spec, rng);
  const Rect source = draw_rect(image, side, rng);
  Rect dest = draw_rect(image, side, rng);
  while (dest.x == source.x && dest.y == source.y) dest = draw_rect(image, side, rng);

  Tampered out{image, rect_mask(image.width, image.height, dest), dest, source};
  for (int dy = 0; dy < side; ++dy) {
    for (int dx = 0; dx < side; ++dx) {
      const std::uint8_t* from = image.pixel(source.x + dx, source.y + dy);
      std::uint8_t* to = out.image.pixel(dest.x + dx, dest.y + dy);
      std::copy(from, from + 3, to);
    }
  }
  return out;
}

Tampered inpaint(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id) {
  spec.validate();
  require_size(image);
  SeededRng rng(derive_seed(spec.seed, sample_id));
  const int side = draw_side(image, spec, rng);
  const Rect region = draw_rect(image, side, rng);

  std::uint64_t sum[3] = {0, 0, 0};
  std::uint64_t count = 0;
  for (int y = region.y - 1; y <= region.y + side; ++y) {
    for (int x = region.x - 1; x <= region.x + side; ++x) {
      if (x < 0 || y < 0 || x >= image.width || y >= image.height) continue;
      if (region.contains(x, y)) continue;
      const std::uint8_t* p = image.pixel(x, y);
      for (int c = 0; c < 3; ++c) sum[c] += p[c];
      ++count;
    }
  }
  std::uint8_t fill[3];
  for (int c = 0; c < 3; ++c) {
    fill[c] = static_cast<std::uint8_t>((2 * sum[c] + count) / (2 * count));
  }

  Tampered out{image, rect_mask(image.width, image.height, region), region, std::nullopt};
  for (int y = region.y; y < region.y + side; ++y) {
    for (int x = region.x; x < region.x + side; ++x) std::copy(fill, fill + 3, out.image.pixel(x, y));
  }
  return out;
}

Tampered tamper(const RgbImage& image, const TamperSpec& spec, std::string_view sample_id) {
  return spec.kind == TamperKind::copy_move ? copy_move(image, spec, sample_id)
                                            : inpaint(image, spec, sample_id);
}

RgbImage generate_base_image(int width, int height, std::uint64_t seed, std::string_view sample_id) {
  if (width <= 0 || height <= 0) throw DimensionError("base image dimensions must be positive");
  SeededRng rng(derive_seed(seed, sample_id, 0xBA5E));
  double gx[3];
  double gy[3];
  double offset[3];
  for (int c = 0; c < 3; ++c) {
    gx[c] = rng.uniform(-120.0, 120.0) / width;
    gy[c] = rng.uniform(-120.0, 120.0) / height;
    offset[c] = rng.uniform(60.0, 196.0);
  }
  const double noise = rng.uniform(8.0, 20.0);
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t* p = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = offset[c] + gx[c] * (x - width / 2.0) + gy[c] * (y - height / 2.0) +
                         noise * rng.normal();
        p[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

std::string synthetic_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%05zu", index);
  return buf;
}

SyntheticSample synthesize_sample(std::size_t index, int width, int height, const TamperSpec& spec) {
  SyntheticSample out;
  out.id = synthetic_id(index);
  Tampered t = tamper(generate_base_image(width, height, spec.seed, out.id), spec, out.id);
  out.image = std::move(t.image);
  out.mask = std::move(t.mask);
  return out;
}

Manifest build_test_corpus(std::size_t count, int width, int height, const TamperSpec& spec,
                           const fs::path& out_dir, int workers) {
  if (count == 0) throw Error("corpus size must be positive");
  spec.validate();
  Manifest manifest;
  manifest.dataset = "synthetic-" + std::string(tamper_name(spec.kind));
  manifest.base_dir = out_dir;
  manifest.samples.resize(count);

  parallel_for(count, workers, [&](std::size_t i) {
    const SyntheticSample s = synthesize_sample(i, width, height, spec);
    const fs::path image_rel = fs::path("images") / (s.id + ".png");
    const fs::path mask_rel = fs::path("masks") / (s.id + ".png");
    write_file(out_dir / image_rel, encode_png(s.image));
    const auto mask_png = encode_png(s.mask);
    write_file(out_dir / mask_rel, mask_png);
    write_file(out_dir / "preds" / "perfect" / (s.id + ".png"), mask_png);
    write_file(out_dir / "preds" / "empty" / (s.id + ".png"),
               encode_png(BinaryMask(width, height)));
    write_file(out_dir / "preds" / "complement" / (s.id + ".png"), encode_png(s.mask.complement()));
    manifest.samples[i] = {s.id, image_rel, mask_rel, Label::manipulated};
  });
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace fe
