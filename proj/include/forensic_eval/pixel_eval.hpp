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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forensic_eval/manifest.hpp"
#include "forensic_eval/pixel_metrics.hpp"
#include "json.hpp"

namespace fe {

enum class Aggregate { mean, global };

// How a prediction whose size differs from its ground truth is reconciled.
//   strict: reject.
//   pad:    zero-pad the ground truth to the prediction size (the model padded
//           its input); padded pixels are excluded through the ShapeMask.
//   resize: bilinearly resize the prediction to the ground-truth size.
enum class ShapeMode { strict, pad, resize };

// Which F1 variants appear in reports. Binary F1 is always reported.
struct F1Variants {
  bool invert = true;
  bool permute = true;
  bool macro = true;
  bool micro = true;
  bool weighted = true;

  static F1Variants none() { return {false, false, false, false, false}; }
  // Comma-separated list of invert,permute,macro,micro,weighted or "all"/"none".
  static F1Variants parse(const std::string& text);
  std::string to_string() const;
};

struct PixelEvalOptions {
  double threshold = 0.5;       // score >= threshold is manipulated
  double mask_threshold = 0.5;  // ground-truth binarization
  F1Variants variants;
  Aggregate aggregate = Aggregate::mean;
  ShapeMode shape = ShapeMode::strict;
  bool invert_gt = false;
  bool invert_pred = false;
  bool with_auc = true;
  int workers = 0;
};

struct PixelSample {
  std::string id;
  ScoreMap scores;
  BinaryMask gt;
  std::optional<ShapeMask> shape;
};

struct SampleResult {
  std::string id;
  ConfusionCounts counts;
  PixelMetricSet metrics;

  friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

struct PixelAggregate {
  PixelMetricSet metrics;
  ConfusionCounts counts;       // dataset-wide sum
  std::size_t samples = 0;
  std::size_t auc_samples = 0;  // samples contributing to the AUC mean
};

struct PixelReport {
  std::string dataset;
  PixelEvalOptions options;
  std::vector<SampleResult> per_sample;  // manipulated samples, manifest order
  PixelAggregate aggregate;
  std::vector<std::string> skipped_auc;
  std::size_t authentic_excluded = 0;
  std::string mask_digest;        // SHA-256 over per-sample ground-truth digests
  std::string prediction_digest;  // SHA-256 over per-sample prediction digests
};

// mean: unweighted per-sample mean of every metric.
// global: metrics recomputed from the summed counts; AUC stays a per-sample mean.
// Folds strictly in input order. Throws fe::Error on an empty input.
PixelAggregate aggregate_results(std::span<const SampleResult> results, Aggregate mode);

// Two-phase evaluator. batch_update scores a batch in parallel and appends the
// results in input order; epoch_update folds everything gathered so far.
class PixelEvaluator {
 public:
  explicit PixelEvaluator(PixelEvalOptions options) : options_(options) {}

  void batch_update(std::span<const PixelSample> batch);
  PixelReport epoch_update(const std::string& dataset) const;
  void reset() { results_.clear(); }

  const std::vector<SampleResult>& results() const noexcept { return results_; }

 private:
  PixelEvalOptions options_;
  std::vector<SampleResult> results_;
};

// Prediction file for a sample: <pred_dir>/<id>.png, else <id>.f32.
std::optional<std::filesystem::path> find_prediction(const std::filesystem::path& pred_dir,
                                                     const std::string& id);

// Evaluates every manipulated sample of the manifest against predictions in
// pred_dir. Authentic samples are excluded from pixel metrics. Throws
// MissingPredictionsError listing every absent prediction before any work.
PixelReport evaluate_pixel(const Manifest& manifest, const std::filesystem::path& pred_dir,
                           const PixelEvalOptions& options);

nlohmann::json options_to_json(const PixelEvalOptions& options);
nlohmann::json metrics_to_json(const PixelMetricSet& metrics, const F1Variants& variants);
nlohmann::json report_to_json(const PixelReport& report);
std::string report_to_csv(const PixelReport& report);

// Column names in report order for the enabled variants.
std::vector<std::string> metric_columns(const F1Variants& variants);
std::optional<double> metric_value(const PixelMetricSet& metrics, const std::string& column);

}  // namespace fe
