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

#include "forensic_eval/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "forensic_eval/error.hpp"
#include "forensic_eval/image_io.hpp"
#include "forensic_eval/parallel.hpp"
#include "forensic_eval/report.hpp"
#include "forensic_eval/rng.hpp"

namespace fe {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view kind_name(PerturbKind kind) noexcept {
  switch (kind) {
    case PerturbKind::gaussian_blur:
      return "gaussian_blur";
    case PerturbKind::gaussian_noise:
      return "gaussian_noise";
    case PerturbKind::jpeg_compress:
      return "jpeg_compress";
  }
  return "unknown";
}

PerturbKind parse_kind(std::string_view name) {
  if (name == "gaussian_blur" || name == "blur") return PerturbKind::gaussian_blur;
  if (name == "gaussian_noise" || name == "noise") return PerturbKind::gaussian_noise;
  if (name == "jpeg_compress" || name == "jpeg") return PerturbKind::jpeg_compress;
  throw Error("unknown perturbation kind '" + std::string(name) + "'");
}

std::vector<double> PerturbSpec::default_levels(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::gaussian_blur:
      return {0, 3, 7, 11, 15, 19};
    case PerturbKind::gaussian_noise:
      return {0, 3, 7, 11, 15, 23};
    case PerturbKind::jpeg_compress:
      return {100, 90, 80, 70, 60, 50};
  }
  return {};
}

void PerturbSpec::validate() const {
  if (levels.empty()) throw Error("perturbation needs at least one level");
  for (const double level : levels) {
    const std::string label = level_label(level);
    if (!std::isfinite(level)) throw Error("non-finite perturbation level");
    switch (kind) {
      case PerturbKind::gaussian_blur:
        if (level < 0 || level != std::floor(level) ||
            (level != 0 && static_cast<long long>(level) % 2 == 0)) {
          throw Error("blur level " + label + " must be 0 or an odd kernel size");
        }
        break;
      case PerturbKind::gaussian_noise:
        if (level < 0) throw Error("noise level " + label + " must be non-negative");
        break;
      case PerturbKind::jpeg_compress:
        if (level < 1 || level > 100 || level != std::floor(level)) {
          throw Error("JPEG quality " + label + " must be an integer in [1,100]");
        }
        break;
    }
  }
}

std::string level_label(double level) { return format_number(level); }

double blur_sigma(int kernel_size) noexcept {
  return 0.3 * ((kernel_size - 1) * 0.5 - 1.0) + 0.8;
}

std::vector<double> gaussian_kernel(int kernel_size) {
  if (kernel_size < 1 || kernel_size % 2 == 0) throw Error("kernel size must be odd and positive");
  const double sigma = blur_sigma(kernel_size);
  const int radius = kernel_size / 2;
  std::vector<double> taps(static_cast<std::size_t>(kernel_size));
  double sum = 0.0;
  for (int i = 0; i < kernel_size; ++i) {
    const double d = i - radius;
    taps[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[static_cast<std::size_t>(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

// Symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline int reflect(int i, int n) noexcept {
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace

RgbImage gaussian_blur(const RgbImage& image, int kernel_size, int workers) {
  if (kernel_size == 0 || kernel_size == 1) return image;
  const auto taps = gaussian_kernel(kernel_size);
  const int radius = kernel_size / 2;
  const int w = image.width;
  const int h = image.height;
  std::vector<double> horizontal(static_cast<std::size_t>(w) * h * 3);
  const int threads = resolve_workers(workers);

#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = -radius; k <= radius; ++k) {
        const std::uint8_t* p = image.pixel(reflect(x + k, w), y);
        const double t = taps[static_cast<std::size_t>(k + radius)];
        acc[0] += t * p[0];
        acc[1] += t * p[1];
        acc[2] += t * p[2];
      }
      double* out = horizontal.data() + (static_cast<std::size_t>(y) * w + x) * 3;
      out[0] = acc[0];
      out[1] = acc[1];
      out[2] = acc[2];
    }
  }

  RgbImage out(w, h);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = -radius; k <= radius; ++k) {
        const double* p = horizontal.data() + (static_cast<std::size_t>(reflect(y + k, h)) * w + x) * 3;
        const double t = taps[static_cast<std::size_t>(k + radius)];
        acc[0] += t * p[0];
        acc[1] += t * p[1];
        acc[2] += t * p[2];
      }
      std::uint8_t* dst = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[c]), 0L, 255L));
      }
    }
  }
  return out;
}

RgbImage gaussian_noise(const RgbImage& image, double sigma, std::uint64_t stream_seed) {
  if (sigma == 0.0) return image;
  SeededRng rng(stream_seed);
  RgbImage out = image;
  for (auto& v : out.data) {
    const double noisy = v + sigma * rng.normal();
    v = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
  }
  return out;
}

RgbImage jpeg_roundtrip(const RgbImage& image, int quality) {
  return to_rgb8(decode_image(encode_jpeg(image, quality)));
}

bool is_identity_level(PerturbKind kind, double level) noexcept {
  switch (kind) {
    case PerturbKind::gaussian_blur:
      return level == 0 || level == 1;
    case PerturbKind::gaussian_noise:
      return level == 0;
    case PerturbKind::jpeg_compress:
      return false;
  }
  return false;
}

RgbImage perturb_image(const RgbImage& image, const PerturbSpec& spec, std::size_t level_index,
                       std::string_view sample_id) {
  if (level_index >= spec.levels.size()) {
    throw Error("level index " + std::to_string(level_index) + " out of range");
  }
  const double level = spec.levels[level_index];
  switch (spec.kind) {
    case PerturbKind::gaussian_blur:
      return gaussian_blur(image, static_cast<int>(level));
    case PerturbKind::gaussian_noise:
      return gaussian_noise(image, level, derive_seed(spec.seed, sample_id, level_index));
    case PerturbKind::jpeg_compress:
      return jpeg_roundtrip(image, static_cast<int>(level));
  }
  return image;
}

std::size_t perturb_corpus(const Manifest& manifest, const PerturbSpec& spec, const fs::path& out_dir,
                           int workers) {
  spec.validate();
  const std::size_t levels = spec.levels.size();
  const std::size_t n = manifest.samples.size();
  const fs::path kind_dir = out_dir / std::string(kind_name(spec.kind));
  for (const double level : spec.levels) fs::create_directories(kind_dir / level_label(level));

  parallel_for(n * levels, workers, [&](std::size_t item) {
    const SampleRecord& s = manifest.samples[item / levels];
    const std::size_t level_index = item % levels;
    const fs::path target = kind_dir / level_label(spec.levels[level_index]) / (s.id + ".png");
    try {
      const auto bytes = read_file(manifest.resolve(s.image));
      const DecodedImage decoded = decode_image(bytes);
      if (is_identity_level(spec.kind, spec.levels[level_index]) && bytes.size() > 4 &&
          bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
        write_file(target, bytes);
        return;
      }
      write_file(target, encode_png(perturb_image(to_rgb8(decoded), spec, level_index, s.id)));
    } catch (const DecodeError& e) {
      throw DecodeError(s.id + ": " + e.what());
    } catch (const Error& e) {
      throw Error(s.id + ": " + e.what());
    }
  });
  return n * levels;
}

RobustnessCurve run_robustness(const Manifest& manifest, const std::vector<fs::path>& pred_dirs,
                               const PerturbSpec& spec, const PixelEvalOptions& options) {
  spec.validate();
  if (pred_dirs.size() != spec.levels.size()) {
    throw Error("got " + std::to_string(pred_dirs.size()) + " prediction directories for " +
                std::to_string(spec.levels.size()) + " levels");
  }
  RobustnessCurve curve;
  curve.kind = spec.kind;
  curve.levels = spec.levels;
  curve.variants = options.variants;
  for (const auto& dir : pred_dirs) {
    curve.points.push_back(evaluate_pixel(manifest, dir, options).aggregate);
  }
  return curve;
}

RobustnessCurve curve_from_reports(PerturbKind kind, const std::vector<double>& levels,
                                   const std::vector<json>& reports) {
  if (levels.size() != reports.size()) {
    throw Error("got " + std::to_string(reports.size()) + " reports for " +
                std::to_string(levels.size()) + " levels");
  }
  RobustnessCurve curve;
  curve.kind = kind;
  curve.levels = levels;
  bool first = true;
  for (const auto& report : reports) {
    if (!report.contains("aggregate") || !report["aggregate"].is_object()) {
      throw ParseError("report lacks an 'aggregate' object");
    }
    const F1Variants variants = report.contains("options") && report["options"].contains("variants")
                                    ? F1Variants::parse(report["options"]["variants"].get<std::string>())
                                    : F1Variants{};
    if (first) {
      curve.variants = variants;
      first = false;
    } else if (variants.to_string() != curve.variants.to_string()) {
      throw ValidationError({"reports disagree on the F1 variants they carry"});
    }
    const auto& agg = report["aggregate"];
    auto number = [&](const char* key) -> double {
      return agg.contains(key) && agg[key].is_number() ? agg[key].get<double>() : 0.0;
    };
    PixelAggregate point;
    point.metrics.f1 = number("f1");
    point.metrics.invert_f1 = number("invert_f1");
    point.metrics.permute_f1 = number("permute_f1");
    point.metrics.negative_f1 = number("negative_f1");
    point.metrics.macro_f1 = number("macro_f1");
    point.metrics.micro_f1 = number("micro_f1");
    point.metrics.weighted_f1 = number("weighted_f1");
    point.metrics.accuracy = number("accuracy");
    point.metrics.iou = number("iou");
    if (agg.contains("auc") && agg["auc"].is_number()) point.metrics.auc = agg["auc"].get<double>();
    point.samples = agg.value("samples", std::size_t{0});
    point.auc_samples = agg.value("auc_samples", std::size_t{0});
    curve.points.push_back(point);
  }
  return curve;
}

std::string curve_to_csv(const RobustnessCurve& curve) {
  std::string out = "kind,level,metric,value\n";
  const auto cols = metric_columns(curve.variants);
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    for (const auto& col : cols) {
      const auto v = metric_value(curve.points[i].metrics, col);
      out += std::string(kind_name(curve.kind)) + "," + level_label(curve.levels[i]) + "," + col +
             "," + (v ? format_number(*v) : std::string()) + "\n";
    }
  }
  return out;
}

std::string curve_to_wide_csv(const RobustnessCurve& curve) {
  const auto cols = metric_columns(curve.variants);
  std::string out = "kind,level";
  for (const auto& c : cols) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    out += std::string(kind_name(curve.kind)) + "," + level_label(curve.levels[i]);
    for (const auto& c : cols) {
      const auto v = metric_value(curve.points[i].metrics, c);
      out += ",";
      if (v) out += format_number(*v);
    }
    out += "\n";
  }
  return out;
}

json curve_to_json(const RobustnessCurve& curve) {
  json points = json::array();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    json p = metrics_to_json(curve.points[i].metrics, curve.variants);
    p["level"] = curve.levels[i];
    p["samples"] = curve.points[i].samples;
    points.push_back(std::move(p));
  }
  json j;
  j["kind"] = std::string(kind_name(curve.kind));
  j["levels"] = curve.levels;
  j["points"] = std::move(points);
  return j;
}

}  // namespace fe
