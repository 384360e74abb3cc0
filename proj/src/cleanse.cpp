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

#include "forensic_eval/cleanse.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "forensic_eval/error.hpp"
#include "forensic_eval/image_io.hpp"
#include "forensic_eval/parallel.hpp"
#include "forensic_eval/report.hpp"
#include "forensic_eval/shape_transform.hpp"
#include "forensic_eval/ssim.hpp"

namespace fe {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) noexcept {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void DisjointSets::unite(std::size_t a, std::size_t b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
}

SimilarityMatrix similarity_matrix(std::span<const GrayImage> images, int width, int height,
                                   int workers) {
  const std::size_t n = images.size();
  if (n < 2) throw Error("similarity matrix needs at least two images");
  std::vector<SsimPlane> planes(n);
  parallel_for(n, workers, [&](std::size_t i) {
    planes[i] = prepare_ssim(resize_bilinear(images[i], width, height));
  });

  SimilarityMatrix m;
  m.n = n;
  m.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double v = ssim(planes[i], planes[j]);
    m.at(i, j) = v;
    m.at(j, i) = v;
  });
  return m;
}

std::vector<std::vector<std::size_t>> threshold_components(const SimilarityMatrix& matrix,
                                                           double threshold) {
  const std::size_t n = matrix.n;
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix.at(i, j) >= threshold) sets.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(i);
  }
  return components;
}

SimilarityGroups group(const SimilarityMatrix& matrix, std::span<const std::string> ids,
                       double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("similarity threshold must lie in (0,1]");
  if (ids.size() != matrix.n) throw DimensionError("id count does not match the matrix size");
  SimilarityGroups out;
  out.threshold = threshold;
  out.members = threshold_components(matrix, threshold);
  for (const auto& component : out.members) {
    std::vector<std::string> names;
    names.reserve(component.size());
    for (const std::size_t i : component) names.push_back(ids[i]);
    out.representatives.push_back(*std::min_element(names.begin(), names.end()));
    out.components.push_back(std::move(names));
  }
  return out;
}

CleanseResult cleanse_dataset(const Manifest& manifest, const CleanseOptions& options) {
  std::vector<const SampleRecord*> manipulated;
  for (const auto& s : manifest.samples) {
    if (s.label == Label::manipulated) manipulated.push_back(&s);
  }
  if (manipulated.size() < 2) throw Error("cleansing needs at least two manipulated samples");
  if (options.width < kSsimWindow || options.height < kSsimWindow) {
    throw DimensionError("comparison resolution must be at least 11x11");
  }

  std::vector<GrayImage> images(manipulated.size());
  std::vector<std::string> failures(manipulated.size());
  parallel_for(manipulated.size(), options.workers, [&](std::size_t i) {
    try {
      images[i] = read_gray(manifest.resolve(manipulated[i]->image));
    } catch (const Error& e) {
      failures[i] = manipulated[i]->id + ": " + e.what();
    }
  });
  std::vector<std::string> errors;
  for (auto& f : failures) {
    if (!f.empty()) errors.push_back(std::move(f));
  }
  if (!errors.empty()) {
    std::string message = "failed to decode " + std::to_string(errors.size()) + " image(s):";
    for (const auto& e : errors) message += "\n  " + e;
    throw DecodeError(message);
  }

  CleanseResult result;
  for (const auto* s : manipulated) result.ids.push_back(s->id);
  result.matrix = similarity_matrix(images, options.width, options.height, options.workers);
  result.groups = group(result.matrix, result.ids, options.threshold);

  const std::unordered_set<std::string> keep(result.groups.representatives.begin(),
                                             result.groups.representatives.end());
  result.cleansed.dataset = manifest.dataset;
  result.cleansed.base_dir = manifest.base_dir;
  for (const auto& s : manifest.samples) {
    if (s.label == Label::authentic || keep.contains(s.id)) result.cleansed.samples.push_back(s);
  }
  return result;
}

nlohmann::json group_report(const CleanseResult& result, const CleanseOptions& options) {
  using nlohmann::json;
  json components = json::array();
  const auto& g = result.groups;
  for (std::size_t c = 0; c < g.members.size(); ++c) {
    json pairwise = json::array();
    const auto& members = g.members[c];
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        pairwise.push_back(json::array({result.ids[members[a]], result.ids[members[b]],
                                        result.matrix.at(members[a], members[b])}));
      }
    }
    json entry;
    entry["members"] = g.components[c];
    entry["representative"] = g.representatives[c];
    entry["pairwise"] = std::move(pairwise);
    components.push_back(std::move(entry));
  }
  json j;
  j["threshold"] = g.threshold;
  j["resize"] = json::array({options.width, options.height});
  j["images"] = result.ids.size();
  j["survivors"] = g.representatives.size();
  j["components"] = std::move(components);
  return j;
}

std::string heatmap_csv(const SimilarityMatrix& matrix) {
  std::string out;
  for (std::size_t i = 0; i < matrix.n; ++i) {
    for (std::size_t j = 0; j < matrix.n; ++j) {
      if (j > 0) out += ",";
      out += format_number(matrix.at(i, j));
    }
    out += "\n";
  }
  return out;
}

}  // namespace fe
