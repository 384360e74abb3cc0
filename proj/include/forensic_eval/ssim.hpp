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
#include <vector>

#include "forensic_eval/raster.hpp"

namespace fe {

// SSIM with the reference parameters: 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, L = 255. The index is the mean of the local SSIM map
// over every window position fully inside the image.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Normalized 1-D window taps; the 2-D window is their outer product.
const std::array<double, kSsimWindow>& ssim_window();

// Per-image quantities reused across every pair the image takes part in.
struct SsimPlane {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;   // width * height
  std::vector<double> mean;     // windowed mean, (width-10) * (height-10)
  std::vector<double> sq_mean;  // windowed mean of squares
};

// Throws DimensionError for images smaller than 11x11.
SsimPlane prepare_ssim(const GrayImage& image);

// Throws DimensionError on mismatched planes. Symmetric in its arguments.
double ssim(const SsimPlane& a, const SsimPlane& b);
double ssim(const GrayImage& a, const GrayImage& b);

}  // namespace fe
