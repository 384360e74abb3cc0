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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forensic_eval/confusion.hpp"
#include "forensic_eval/manifest.hpp"
#include "json.hpp"

namespace fe {

struct DetectionRecord {
  std::string id;
  double score = 0;  // in [0,1]
  Label label = Label::authentic;
};

struct ImageMetrics {
  ConfusionCounts counts;  // manipulated is the positive class
  double f1 = 0;
  double accuracy = 0;
  std::optional<double> auc;  // absent when only one label is present
};

// Gather-then-compute detection metrics. score >= threshold predicts
// manipulated. Throws fe::Error on empty input.
ImageMetrics evaluate_image(std::span<const DetectionRecord> records, double threshold = 0.5);

// Parses an `id,score` CSV (header required) and joins it with the manifest
// labels in manifest order. Throws ParseError / ValidationError naming the
// offending ids.
std::vector<DetectionRecord> parse_scores(std::string_view csv, const Manifest& manifest);
std::vector<DetectionRecord> load_scores(const std::filesystem::path& path, const Manifest& manifest);

nlohmann::json image_metrics_to_json(const ImageMetrics& metrics);

}  // namespace fe
