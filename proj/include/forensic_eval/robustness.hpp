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
#include <string>
#include <string_view>
#include <vector>

#include "forensic_eval/manifest.hpp"
#include "forensic_eval/pixel_eval.hpp"
#include "forensic_eval/raster.hpp"
#include "json.hpp"

namespace fe {

enum class PerturbKind { gaussian_blur, gaussian_noise, jpeg_compress };

std::string_view kind_name(PerturbKind kind) noexcept;
PerturbKind parse_kind(std::string_view name);

// levels: blur = odd kernel size in pixels (0 = identity); noise = standard
// deviation on the 0-255 scale (0 = identity); jpeg = quality in [1,100].
struct PerturbSpec {
  PerturbKind kind = PerturbKind::gaussian_blur;
  std::vector<double> levels;
  std::uint64_t seed = 0;

  static std::vector<double> default_levels(PerturbKind kind);
  // Throws fe::Error describing the first invalid level.
  void validate() const;
};

// Level formatted for directory names and reports ("3", "2.5").
std::string level_label(double level);

// sigma = 0.3 * ((k - 1) / 2 - 1) + 0.8
double blur_sigma(int kernel_size) noexcept;
// Normalized 1-D Gaussian taps for an odd kernel size.
std::vector<double> gaussian_kernel(int kernel_size);

// Separable Gaussian blur with symmetric (edge-repeating) reflection.
RgbImage gaussian_blur(const RgbImage& image, int kernel_size, int workers = 1);
// Adds i.i.d. N(0, sigma^2) per channel sample, rounds and clamps to [0,255].
RgbImage gaussian_noise(const RgbImage& image, double sigma, std::uint64_t stream_seed);
RgbImage jpeg_roundtrip(const RgbImage& image, int quality);

// Applies spec.levels[level_index]. Noise is seeded from
// derive_seed(spec.seed, sample_id, level_index).
RgbImage perturb_image(const RgbImage& image, const PerturbSpec& spec, std::size_t level_index,
                       std::string_view sample_id);

bool is_identity_level(PerturbKind kind, double level) noexcept;

// Writes <out>/<kind>/<level>/<id>.png for every sample and level. Identity
// levels copy PNG inputs verbatim. Returns the number of files written.
std::size_t perturb_corpus(const Manifest& manifest, const PerturbSpec& spec,
                           const std::filesystem::path& out_dir, int workers = 0);

struct RobustnessCurve {
  PerturbKind kind = PerturbKind::gaussian_blur;
  std::vector<double> levels;
  std::vector<PixelAggregate> points;  // one per level, level order
  F1Variants variants;
};

// Evaluates the manifest against one prediction directory per level.
RobustnessCurve run_robustness(const Manifest& manifest,
                               const std::vector<std::filesystem::path>& pred_dirs,
                               const PerturbSpec& spec, const PixelEvalOptions& options);

// Rebuilds a curve from per-level pixel report JSON documents.
RobustnessCurve curve_from_reports(PerturbKind kind, const std::vector<double>& levels,
                                   const std::vector<nlohmann::json>& reports);

// Long form: kind,level,metric,value.
std::string curve_to_csv(const RobustnessCurve& curve);
// Wide form: kind,level,<metric columns>; one row per level.
std::string curve_to_wide_csv(const RobustnessCurve& curve);
nlohmann::json curve_to_json(const RobustnessCurve& curve);

}  // namespace fe
