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

#include "forensic_eval/pixel_eval.hpp"

#include <algorithm>
#include <sstream>

#include "forensic_eval/error.hpp"
#include "forensic_eval/image_io.hpp"
#include "forensic_eval/parallel.hpp"
#include "forensic_eval/report.hpp"
#include "forensic_eval/shape_transform.hpp"

namespace fe {

namespace fs = std::filesystem;
using nlohmann::json;

F1Variants F1Variants::parse(const std::string& text) {
  if (text == "all") return {};
  F1Variants out = none();
  if (text == "none" || text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "invert") {
      out.invert = true;
    } else if (item == "permute") {
      out.permute = true;
    } else if (item == "macro") {
      out.macro = true;
    } else if (item == "micro") {
      out.micro = true;
    } else if (item == "weighted") {
      out.weighted = true;
    } else if (item == "binary" || item == "f1") {
      // always reported
    } else {
      throw Error("unknown F1 variant '" + item + "'");
    }
  }
  return out;
}

std::string F1Variants::to_string() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(invert, "invert");
  add(permute, "permute");
  add(macro, "macro");
  add(micro, "micro");
  add(weighted, "weighted");
  return out.empty() ? "none" : out;
}

PixelAggregate aggregate_results(std::span<const SampleResult> results, Aggregate mode) {
  if (results.empty()) throw Error("no manipulated samples to aggregate");
  PixelAggregate agg;
  agg.samples = results.size();
  PixelMetricSet sum;
  double auc_sum = 0.0;
  for (const auto& r : results) {
    agg.counts += r.counts;
    const auto& m = r.metrics;
    sum.f1 += m.f1;
    sum.invert_f1 += m.invert_f1;
    sum.permute_f1 += m.permute_f1;
    sum.negative_f1 += m.negative_f1;
    sum.macro_f1 += m.macro_f1;
    sum.micro_f1 += m.micro_f1;
    sum.weighted_f1 += m.weighted_f1;
    sum.accuracy += m.accuracy;
    sum.iou += m.iou;
    if (m.auc) {
      auc_sum += *m.auc;
      ++agg.auc_samples;
    }
  }
  std::optional<double> auc_mean;
  if (agg.auc_samples > 0) auc_mean = auc_sum / static_cast<double>(agg.auc_samples);

  if (mode == Aggregate::global) {
    agg.metrics = metrics_from_counts(agg.counts, auc_mean);
    return agg;
  }
  const double n = static_cast<double>(results.size());
  agg.metrics.f1 = sum.f1 / n;
  agg.metrics.invert_f1 = sum.invert_f1 / n;
  agg.metrics.permute_f1 = sum.permute_f1 / n;
  agg.metrics.negative_f1 = sum.negative_f1 / n;
  agg.metrics.macro_f1 = sum.macro_f1 / n;
  agg.metrics.micro_f1 = sum.micro_f1 / n;
  agg.metrics.weighted_f1 = sum.weighted_f1 / n;
  agg.metrics.accuracy = sum.accuracy / n;
  agg.metrics.iou = sum.iou / n;
  agg.metrics.auc = auc_mean;
  return agg;
}

void PixelEvaluator::batch_update(std::span<const PixelSample> batch) {
  std::vector<SampleResult> scored(batch.size());
  parallel_for(batch.size(), options_.workers, [&](std::size_t i) {
    const PixelSample& s = batch[i];
    try {
      const auto eval = evaluate_sample(s.scores, s.gt, s.shape ? &*s.shape : nullptr,
                                        options_.threshold, options_.with_auc);
      scored[i] = {s.id, eval.counts, eval.metrics};
    } catch (const DimensionError& e) {
      throw DimensionError(s.id + ": " + e.what());
    } catch (const Error& e) {
      throw Error(s.id + ": " + e.what());
    }
  });
  results_.insert(results_.end(), std::make_move_iterator(scored.begin()),
                  std::make_move_iterator(scored.end()));
}

PixelReport PixelEvaluator::epoch_update(const std::string& dataset) const {
  PixelReport report;
  report.dataset = dataset;
  report.options = options_;
  report.per_sample = results_;
  report.aggregate = aggregate_results(results_, options_.aggregate);
  for (const auto& r : results_) {
    if (!r.metrics.auc) report.skipped_auc.push_back(r.id);
  }
  return report;
}

std::optional<fs::path> find_prediction(const fs::path& pred_dir, const std::string& id) {
  for (const char* ext : {".png", ".f32"}) {
    fs::path candidate = pred_dir / (id + ext);
    if (fs::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

namespace {

struct LoadedSample {
  PixelSample sample;
  std::string mask_digest;
  std::string pred_digest;
};

ScoreMap complement_scores(const ScoreMap& scores) {
  std::vector<float> values(scores.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = 1.0f - scores.at(i);
  return ScoreMap(scores.width(), scores.height(), std::move(values));
}

LoadedSample load_sample(const Manifest& manifest, const SampleRecord& record,
                         const fs::path& pred_path, const PixelEvalOptions& options) {
  LoadedSample out;
  out.sample.id = record.id;

  const auto mask_bytes = read_file(manifest.resolve(*record.mask));
  out.mask_digest = sha256_hex(mask_bytes);
  BinaryMask gt = decode_mask(mask_bytes, options.mask_threshold);
  if (options.invert_gt) gt = gt.complement();

  const auto pred_bytes = read_file(pred_path);
  out.pred_digest = sha256_hex(pred_bytes);
  ScoreMap scores = decode_scoremap(pred_bytes, pred_path.extension() == ".f32");
  if (options.invert_pred) scores = complement_scores(scores);

  const bool same = scores.width() == gt.width() && scores.height() == gt.height();
  if (!same) {
    const std::string detail = "prediction " + std::to_string(scores.width()) + "x" +
                               std::to_string(scores.height()) + " vs ground truth " +
                               std::to_string(gt.width()) + "x" + std::to_string(gt.height());
    switch (options.shape) {
      case ShapeMode::strict:
        throw DimensionError("dimension mismatch: " + detail);
      case ShapeMode::pad: {
        auto padded = apply_shape_transform(gt, ShapePolicy::pad_to(scores.width(), scores.height()));
        gt = std::move(padded.plane);
        out.sample.shape = std::move(padded.shape);
        break;
      }
      case ShapeMode::resize:
        scores = resize_bilinear(scores, gt.width(), gt.height());
        break;
    }
  }
  out.sample.scores = std::move(scores);
  out.sample.gt = std::move(gt);
  return out;
}

constexpr std::size_t kChunk = 128;

}  // namespace

PixelReport evaluate_pixel(const Manifest& manifest, const fs::path& pred_dir,
                           const PixelEvalOptions& options) {
  std::vector<const SampleRecord*> records;
  std::vector<fs::path> preds;
  std::vector<std::string> missing;
  std::size_t authentic = 0;
  for (const auto& s : manifest.samples) {
    if (s.label != Label::manipulated) {
      ++authentic;
      continue;
    }
    auto found = find_prediction(pred_dir, s.id);
    if (!found) {
      missing.push_back(s.id);
      continue;
    }
    records.push_back(&s);
    preds.push_back(std::move(*found));
  }
  if (!missing.empty()) throw MissingPredictionsError(std::move(missing));

  PixelEvaluator evaluator(options);
  std::string mask_digests;
  std::string pred_digests;
  for (std::size_t begin = 0; begin < records.size(); begin += kChunk) {
    const std::size_t count = std::min(kChunk, records.size() - begin);
    std::vector<LoadedSample> loaded(count);
    parallel_for(count, options.workers, [&](std::size_t i) {
      const SampleRecord& record = *records[begin + i];
      try {
        loaded[i] = load_sample(manifest, record, preds[begin + i], options);
      } catch (const DimensionError& e) {
        throw DimensionError(record.id + ": " + e.what());
      } catch (const DecodeError& e) {
        throw DecodeError(record.id + ": " + e.what());
      } catch (const Error& e) {
        throw Error(record.id + ": " + e.what());
      }
    });
    std::vector<PixelSample> batch;
    batch.reserve(count);
    for (auto& l : loaded) {
      mask_digests += l.sample.id + ":" + l.mask_digest + "\n";
      pred_digests += l.sample.id + ":" + l.pred_digest + "\n";
      batch.push_back(std::move(l.sample));
    }
    evaluator.batch_update(batch);
  }

  PixelReport report = evaluator.epoch_update(manifest.dataset);
  report.authentic_excluded = authentic;
  report.mask_digest = sha256_hex(mask_digests);
  report.prediction_digest = sha256_hex(pred_digests);
  return report;
}

std::vector<std::string> metric_columns(const F1Variants& v) {
  std::vector<std::string> cols{"f1"};
  if (v.invert) cols.emplace_back("invert_f1");
  if (v.permute) cols.emplace_back("permute_f1");
  if (v.macro || v.weighted) cols.emplace_back("negative_f1");
  if (v.macro) cols.emplace_back("macro_f1");
  if (v.micro) cols.emplace_back("micro_f1");
  if (v.weighted) cols.emplace_back("weighted_f1");
  cols.emplace_back("auc");
  cols.emplace_back("accuracy");
  cols.emplace_back("iou");
  return cols;
}

std::optional<double> metric_value(const PixelMetricSet& m, const std::string& column) {
  if (column == "f1") return m.f1;
  if (column == "invert_f1") return m.invert_f1;
  if (column == "permute_f1") return m.permute_f1;
  if (column == "negative_f1") return m.negative_f1;
  if (column == "macro_f1") return m.macro_f1;
  if (column == "micro_f1") return m.micro_f1;
  if (column == "weighted_f1") return m.weighted_f1;
  if (column == "auc") return m.auc;
  if (column == "accuracy") return m.accuracy;
  if (column == "iou") return m.iou;
  throw Error("unknown metric column '" + column + "'");
}

json options_to_json(const PixelEvalOptions& o) {
  json j;
  j["threshold"] = o.threshold;
  j["mask_threshold"] = o.mask_threshold;
  j["variants"] = o.variants.to_string();
  j["aggregate"] = o.aggregate == Aggregate::mean ? "mean" : "global";
  j["shape"] = o.shape == ShapeMode::strict ? "strict" : o.shape == ShapeMode::pad ? "pad" : "resize";
  j["invert_gt"] = o.invert_gt;
  j["invert_pred"] = o.invert_pred;
  j["auc"] = o.with_auc;
  return j;
}

json metrics_to_json(const PixelMetricSet& m, const F1Variants& variants) {
  json j = json::object();
  for (const auto& col : metric_columns(variants)) {
    const auto v = metric_value(m, col);
    j[col] = v ? json(*v) : json(nullptr);
  }
  return j;
}

json report_to_json(const PixelReport& r) {
  json per_sample = json::array();
  for (const auto& s : r.per_sample) {
    json entry;
    entry["id"] = s.id;
    entry["tp"] = s.counts.tp;
    entry["tn"] = s.counts.tn;
    entry["fp"] = s.counts.fp;
    entry["fn"] = s.counts.fn;
    const json metrics = metrics_to_json(s.metrics, r.options.variants);
    for (const auto& [k, v] : metrics.items()) entry[k] = v;
    per_sample.push_back(std::move(entry));
  }
  json aggregate = metrics_to_json(r.aggregate.metrics, r.options.variants);
  aggregate["samples"] = r.aggregate.samples;
  aggregate["auc_samples"] = r.aggregate.auc_samples;
  aggregate["tp"] = r.aggregate.counts.tp;
  aggregate["tn"] = r.aggregate.counts.tn;
  aggregate["fp"] = r.aggregate.counts.fp;
  aggregate["fn"] = r.aggregate.counts.fn;

  json j;
  j["dataset"] = r.dataset;
  j["per_sample"] = std::move(per_sample);
  j["aggregate"] = std::move(aggregate);
  j["skipped_auc"] = r.skipped_auc;
  j["authentic_excluded"] = r.authentic_excluded;
  j["options"] = options_to_json(r.options);
  return j;
}

std::string report_to_csv(const PixelReport& r) {
  const auto cols = metric_columns(r.options.variants);
  std::string out = "id,tp,tn,fp,fn";
  for (const auto& c : cols) out += "," + c;
  out += "\n";
  for (const auto& s : r.per_sample) {
    out += s.id + "," + std::to_string(s.counts.tp) + "," + std::to_string(s.counts.tn) + "," +
           std::to_string(s.counts.fp) + "," + std::to_string(s.counts.fn);
    for (const auto& c : cols) {
      const auto v = metric_value(s.metrics, c);
      out += ",";
      if (v) out += format_number(*v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace fe
