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

#include "forensic_eval/ssim.hpp"

#include <cmath>
#include <string>

#include "forensic_eval/error.hpp"

namespace fe {

const std::array<double, kSsimWindow>& ssim_window() {
  static const std::array<double, kSsimWindow> taps = [] {
    std::array<double, kSsimWindow> t{};
    double sum = 0.0;
    constexpr int radius = kSsimWindow / 2;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - radius;
      t[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * kSsimSigma * kSsimSigma));
      sum += t[static_cast<std::size_t>(i)];
    }
    for (double& v : t) v /= sum;
    return t;
  }();
  return taps;
}

namespace {

// Windowed weighted mean over all fully-contained window positions.
// out has (w - 10) * (h - 10) entries; `row` is scratch of (w - 10) * h.
void filter_valid(const double* src, int w, int h, std::vector<double>& row, std::vector<double>& out) {
  const auto& taps = ssim_window();
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  row.resize(static_cast<std::size_t>(ow) * h);
  out.resize(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < h; ++y) {
    const double* line = src + static_cast<std::size_t>(y) * w;
    double* dst = row.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += taps[static_cast<std::size_t>(k)] * line[x + k];
      dst[x] = acc;
    }
  }
  for (int y = 0; y < oh; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) dst[x] = 0.0;
    for (int k = 0; k < kSsimWindow; ++k) {
      const double t = taps[static_cast<std::size_t>(k)];
      const double* in = row.data() + static_cast<std::size_t>(y + k) * ow;
      for (int x = 0; x < ow; ++x) dst[x] += t * in[x];
    }
  }
}

struct SsimScratch {
  std::vector<double> product;
  std::vector<double> row;
  std::vector<double> cross;
};

SsimScratch& scratch() {
  thread_local SsimScratch s;
  return s;
}

}  // namespace

SsimPlane prepare_ssim(const GrayImage& image) {
  if (image.width < kSsimWindow || image.height < kSsimWindow) {
    throw DimensionError("SSIM needs images of at least 11x11, got " + std::to_string(image.width) +
                         "x" + std::to_string(image.height));
  }
  SsimPlane plane;
  plane.width = image.width;
  plane.height = image.height;
  plane.pixels.assign(image.data.begin(), image.data.end());
  std::vector<double> squares(plane.pixels.size());
  for (std::size_t i = 0; i < squares.size(); ++i) squares[i] = plane.pixels[i] * plane.pixels[i];
  std::vector<double> row;
  filter_valid(plane.pixels.data(), plane.width, plane.height, row, plane.mean);
  filter_valid(squares.data(), plane.width, plane.height, row, plane.sq_mean);
  return plane;
}

double ssim(const SsimPlane& a, const SsimPlane& b) {
  if (a.width != b.width || a.height != b.height) {
    throw DimensionError("SSIM operands differ in size: " + std::to_string(a.width) + "x" +
                         std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                         std::to_string(b.height));
  }
  SsimScratch& s = scratch();
  s.product.resize(a.pixels.size());
  for (std::size_t i = 0; i < s.product.size(); ++i) s.product[i] = a.pixels[i] * b.pixels[i];
  filter_valid(s.product.data(), a.width, a.height, s.row, s.cross);

  double total = 0.0;
  const std::size_t n = s.cross.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double mu_a = a.mean[i];
    const double mu_b = b.mean[i];
    const double mu_ab = mu_a * mu_b;
    const double var_a = a.sq_mean[i] - mu_a * mu_a;
    const double var_b = b.sq_mean[i] - mu_b * mu_b;
    const double cov = s.cross[i] - mu_ab;
    const double num = (2.0 * mu_ab + kSsimC1) * (2.0 * cov + kSsimC2);
    const double den = (mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2);
    total += num / den;
  }
  return total / static_cast<double>(n);
}

double ssim(const GrayImage& a, const GrayImage& b) { return ssim(prepare_ssim(a), prepare_ssim(b)); }

}  // namespace fe
