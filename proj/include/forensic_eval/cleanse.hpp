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
#include <span>
#include <string>
#include <vector>

#include "forensic_eval/manifest.hpp"
#include "forensic_eval/raster.hpp"
#include "json.hpp"

namespace fe {

// Symmetric n x n SSIM matrix, row-major, unit diagonal.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const noexcept { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) noexcept { return values[i * n + j]; }
};

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);

  std::size_t find(std::size_t x) noexcept;
  void unite(std::size_t a, std::size_t b) noexcept;

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Every image is resized (bilinear) to width x height before comparison. Only
// the upper triangle is computed, in parallel, and mirrored.
SimilarityMatrix similarity_matrix(std::span<const GrayImage> images, int width = 256,
                                   int height = 256, int workers = 0);

// Connected components of the graph with an edge wherever the similarity is
// >= threshold (i != j). Components are ordered by their first member; members
// ascend.
std::vector<std::vector<std::size_t>> threshold_components(const SimilarityMatrix& matrix,
                                                           double threshold);

struct SimilarityGroups {
  double threshold = 0.9;
  std::vector<std::vector<std::size_t>> members;  // indices into the id list
  std::vector<std::vector<std::string>> components;
  std::vector<std::string> representatives;  // lexicographically smallest id per component
};

// Throws fe::Error unless threshold lies in (0,1].
SimilarityGroups group(const SimilarityMatrix& matrix, std::span<const std::string> ids,
                       double threshold = 0.9);

struct CleanseOptions {
  double threshold = 0.9;
  int width = 256;
  int height = 256;
  int workers = 0;
};

struct CleanseResult {
  Manifest cleansed;                // representatives plus every authentic sample
  std::vector<std::string> ids;     // manipulated ids in manifest order (matrix order)
  SimilarityMatrix matrix;
  SimilarityGroups groups;
};

// Groups near-duplicate manipulated images and keeps one representative per
// group. Authentic samples pass through. Decode failures are collected for
// every id and reported together.
CleanseResult cleanse_dataset(const Manifest& manifest, const CleanseOptions& options);

// {"threshold", "resize", "components": [{"members", "representative", "pairwise"}]}
nlohmann::json group_report(const CleanseResult& result, const CleanseOptions& options);

// n rows of n comma-separated values.
std::string heatmap_csv(const SimilarityMatrix& matrix);

}  // namespace fe
