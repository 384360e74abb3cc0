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

// forensic-eval: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "forensic_eval/cleanse.hpp"
#include "forensic_eval/error.hpp"
#include "forensic_eval/image_metrics.hpp"
#include "forensic_eval/manifest.hpp"
#include "forensic_eval/pixel_eval.hpp"
#include "forensic_eval/report.hpp"
#include "forensic_eval/robustness.hpp"
#include "forensic_eval/synth.hpp"
#include "forensic_eval/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// JSON configuration files. Nested objects select subcommands, e.g.
// {"eval": {"pixel": {"threshold": 0.5}}}. Keys may use '_' or '-'.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& results = opt->results();
        j[name] = results.size() == 1 ? json(results.front()) : json(results);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw CLI::FileError(std::string("malformed JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::FileError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static void collect(const json& object, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : object.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        out.push_back({next, "++", {}});
        collect(value, next, out);
        out.push_back({next, "--", {}});
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fe::format_number(v.get<double>());
    return v.dump();
  }
};

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_image_file(const fs::path& p) {
  const std::string ext = to_lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

void write_json(const fs::path& path, const json& j) { fe::write_text(path, j.dump(2) + "\n"); }

json envelope(const std::string& command, json config, json inputs) {
  json j;
  j["tool"] = "forensic-eval";
  j["version"] = fe::kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["inputs"] = std::move(inputs);
  return j;
}

// Merges the envelope keys into a report document.
json with_envelope(json body, const json& env) {
  for (const auto& [k, v] : env.items()) body[k] = v;
  return body;
}

std::string path_text(const fs::path& p) { return p.generic_string(); }

fs::path relative_to(const fs::path& target, const fs::path& base) {
  return fs::weakly_canonical(target).lexically_relative(fs::weakly_canonical(base));
}

// Digest over the per-sample image files, in manifest order.
std::string images_digest(const fe::Manifest& m) {
  std::string lines;
  for (const auto& s : m.samples) {
    lines += s.id + ":" + fe::sha256_file(m.resolve(s.image)) + "\n";
  }
  return fe::sha256_hex(lines);
}

void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += "  ";
      out += cells[c] + std::string(width[c] - cells[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    std::cout << out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string fixed_or_na(const std::optional<double>& v) {
  return v ? fe::format_fixed(*v) : std::string("n/a");
}

// ---------------------------------------------------------------- manifest

// Scans <dir>/images and <dir>/masks. Masks pair with images by file stem;
// paths are recorded relative to `base`.
fe::Manifest scan_layout(const fs::path& dir, const fs::path& base, const std::string& dataset) {
  const fs::path images_dir = dir / "images";
  const fs::path masks_dir = dir / "masks";
  if (!fs::is_directory(images_dir)) {
    throw fe::Error("no images/ directory under " + path_text(dir));
  }
  std::vector<std::string> violations;
  auto scan = [&](const fs::path& sub, const char* what) {
    std::map<std::string, fs::path> by_stem;
    if (!fs::is_directory(sub)) return by_stem;
    for (const auto& entry : fs::directory_iterator(sub)) {
      if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
      const std::string stem = entry.path().stem().string();
      if (!by_stem.emplace(stem, entry.path()).second) {
        violations.push_back(std::string("two ") + what + " files share the stem '" + stem + "'");
      }
    }
    return by_stem;
  };
  const auto images = scan(images_dir, "image");
  const auto masks = scan(masks_dir, "mask");
  for (const auto& [stem, path] : masks) {
    if (!images.contains(stem)) {
      violations.push_back("orphan mask '" + path_text(relative_to(path, dir)) + "' has no image");
    }
  }
  if (!violations.empty()) throw fe::ValidationError(std::move(violations));

  fe::Manifest m;
  m.dataset = dataset.empty() ? fs::weakly_canonical(dir).filename().string() : dataset;
  m.base_dir = base;
  for (const auto& [stem, path] : images) {
    fe::SampleRecord rec;
    rec.id = stem;
    rec.image = relative_to(path, base).generic_string();
    if (const auto it = masks.find(stem); it != masks.end()) {
      rec.mask = relative_to(it->second, base).generic_string();
      rec.label = fe::Label::manipulated;
    }
    m.samples.push_back(std::move(rec));
  }
  auto problems = fe::validate_manifest(m, true);
  if (!problems.empty()) throw fe::ValidationError(std::move(problems));
  return m;
}

struct ManifestBuildArgs {
  fs::path dir;
  fs::path out;
  std::string dataset;
};

int run_manifest_build(const ManifestBuildArgs& a) {
  fs::create_directories(a.out);
  const fe::Manifest m = scan_layout(a.dir, a.out, a.dataset);
  const fs::path target = a.out / "manifest.json";
  fe::save_manifest(m, target);
  std::cout << "wrote " << path_text(target) << ": " << m.samples.size() << " samples ("
            << m.manipulated_count() << " manipulated, " << m.samples.size() - m.manipulated_count()
            << " authentic)\n";
  return 0;
}

struct ManifestValidateArgs {
  fs::path target;
  bool skip_files = false;
};

int run_manifest_validate(const ManifestValidateArgs& a) {
  std::vector<std::string> violations;
  std::size_t count = 0;
  try {
    if (fs::is_directory(a.target)) {
      count = scan_layout(a.target, a.target, "").samples.size();
    } else {
      const fe::Manifest m = fe::load_manifest(a.target);
      count = m.samples.size();
      if (!a.skip_files) violations = fe::validate_manifest(m, true);
    }
  } catch (const fe::ValidationError& e) {
    violations = e.violations();
  }
  if (!violations.empty()) {
    std::cerr << path_text(a.target) << ": " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kExitData;
  }
  std::cout << path_text(a.target) << ": valid, " << count << " samples\n";
  return 0;
}

// -------------------------------------------------------------------- eval

struct PixelArgs {
  fs::path manifest;
  fs::path preds;
  fs::path out;
  double threshold = 0.5;
  double mask_threshold = 0.5;
  std::string variants = "all";
  std::string aggregate = "mean";
  std::string shape = "strict";
  bool invert_gt = false;
  bool invert_pred = false;
  bool no_auc = false;
  int workers = 0;
};

int run_eval_pixel(const PixelArgs& a) {
  fe::PixelEvalOptions opts;
  opts.threshold = a.threshold;
  opts.mask_threshold = a.mask_threshold;
  opts.variants = fe::F1Variants::parse(a.variants);
  opts.aggregate = a.aggregate == "global" ? fe::Aggregate::global : fe::Aggregate::mean;
  opts.shape = a.shape == "pad" ? fe::ShapeMode::pad
               : a.shape == "resize" ? fe::ShapeMode::resize
                                     : fe::ShapeMode::strict;
  opts.invert_gt = a.invert_gt;
  opts.invert_pred = a.invert_pred;
  opts.with_auc = !a.no_auc;
  opts.workers = a.workers;

  const fe::Manifest manifest = fe::load_manifest(a.manifest);
  const fe::PixelReport report = fe::evaluate_pixel(manifest, a.preds, opts);

  json config = fe::options_to_json(opts);
  config["manifest"] = path_text(a.manifest);
  config["preds"] = path_text(a.preds);
  config["out"] = path_text(a.out);
  json inputs;
  inputs["manifest"] = fe::sha256_file(a.manifest);
  inputs["masks"] = report.mask_digest;
  inputs["predictions"] = report.prediction_digest;

  fs::create_directories(a.out);
  write_json(a.out / "pixel_report.json",
             with_envelope(fe::report_to_json(report), envelope("eval pixel", config, inputs)));
  fe::write_text(a.out / "pixel_report.csv", fe::report_to_csv(report));

  std::cout << "dataset " << report.dataset << ": " << report.aggregate.samples
            << " manipulated samples, " << report.authentic_excluded << " authentic excluded, "
            << report.skipped_auc.size() << " without defined AUC\n";
  const auto cols = fe::metric_columns(opts.variants);
  std::vector<std::string> row;
  for (const auto& c : cols) row.push_back(fixed_or_na(fe::metric_value(report.aggregate.metrics, c)));
  print_table(cols, {row});
  return 0;
}

struct ImageArgs {
  fs::path manifest;
  fs::path scores;
  fs::path out;
  double threshold = 0.5;
};

int run_eval_image(const ImageArgs& a) {
  const fe::Manifest manifest = fe::load_manifest(a.manifest);
  const auto records = fe::load_scores(a.scores, manifest);
  const fe::ImageMetrics metrics = fe::evaluate_image(records, a.threshold);

  json config;
  config["manifest"] = path_text(a.manifest);
  config["scores"] = path_text(a.scores);
  config["out"] = path_text(a.out);
  config["threshold"] = a.threshold;
  json inputs;
  inputs["manifest"] = fe::sha256_file(a.manifest);
  inputs["scores"] = fe::sha256_file(a.scores);

  json body;
  body["dataset"] = manifest.dataset;
  body["samples"] = records.size();
  body["metrics"] = fe::image_metrics_to_json(metrics);
  fs::create_directories(a.out);
  write_json(a.out / "image_report.json", with_envelope(body, envelope("eval image", config, inputs)));

  std::cout << "dataset " << manifest.dataset << ": " << records.size() << " images\n";
  print_table({"f1", "auc", "accuracy"},
              {{fe::format_fixed(metrics.f1), fixed_or_na(metrics.auc), fe::format_fixed(metrics.accuracy)}});
  return 0;
}

// ----------------------------------------------------------------- perturb

struct PerturbArgs {
  fs::path manifest;
  fs::path out;
  std::string kind;
  std::vector<double> levels;
  std::uint64_t seed = 0;
  int workers = 0;
};

int run_perturb(const PerturbArgs& a) {
  const fe::Manifest manifest = fe::load_manifest(a.manifest);
  fe::PerturbSpec spec;
  spec.kind = fe::parse_kind(a.kind);
  spec.levels = a.levels.empty() ? fe::PerturbSpec::default_levels(spec.kind) : a.levels;
  spec.seed = a.seed;
  spec.validate();
  const std::size_t written = fe::perturb_corpus(manifest, spec, a.out, a.workers);

  json config;
  config["manifest"] = path_text(a.manifest);
  config["out"] = path_text(a.out);
  config["kind"] = std::string(fe::kind_name(spec.kind));
  config["levels"] = spec.levels;
  config["seed"] = spec.seed;
  json inputs;
  inputs["manifest"] = fe::sha256_file(a.manifest);
  inputs["images"] = images_digest(manifest);
  json body;
  body["files_written"] = written;
  write_json(a.out / "perturb_report.json", with_envelope(body, envelope("perturb", config, inputs)));
  std::cout << "wrote " << written << " images for " << spec.levels.size() << " "
            << fe::kind_name(spec.kind) << " levels under "
            << path_text(a.out / std::string(fe::kind_name(spec.kind))) << "\n";
  return 0;
}

// ----------------------------------------------------------------- cleanse

struct CleanseArgs {
  fs::path manifest;
  fs::path out;
  double threshold = 0.9;
  std::vector<int> resize = {256, 256};
  int workers = 0;
};

int run_cleanse(const CleanseArgs& a) {
  const fe::Manifest manifest = fe::load_manifest(a.manifest);
  fe::CleanseOptions opts;
  opts.threshold = a.threshold;
  opts.width = a.resize.at(0);
  opts.height = a.resize.at(1);
  opts.workers = a.workers;
  const fe::CleanseResult result = fe::cleanse_dataset(manifest, opts);

  fs::create_directories(a.out);
  fe::Manifest cleansed = result.cleansed;
  for (auto& s : cleansed.samples) {
    s.image = relative_to(manifest.resolve(s.image), a.out).generic_string();
    if (s.mask) s.mask = relative_to(manifest.resolve(*s.mask), a.out).generic_string();
  }
  cleansed.base_dir = a.out;
  fe::save_manifest(cleansed, a.out / "manifest.json");

  json config;
  config["manifest"] = path_text(a.manifest);
  config["out"] = path_text(a.out);
  config["threshold"] = a.threshold;
  config["resize"] = a.resize;
  json inputs;
  inputs["manifest"] = fe::sha256_file(a.manifest);
  inputs["images"] = images_digest(manifest);
  write_json(a.out / "groups.json",
             with_envelope(fe::group_report(result, opts), envelope("cleanse", config, inputs)));
  fe::write_text(a.out / "heatmap.csv", fe::heatmap_csv(result.matrix));

  const std::size_t before = result.ids.size();
  const std::size_t after = result.groups.representatives.size();
  std::cout << "kept " << after << " of " << before << " manipulated samples (" << before - after
            << " removed) in " << result.groups.members.size() << " groups at SSIM >= "
            << fe::format_number(a.threshold) << "\n";
  return 0;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  fs::path out;
  std::size_t count = 20;
  int width = 256;
  int height = 256;
  std::string kind = "copy_move";
  double area_min = 0.01;
  double area_max = 0.15;
  std::uint64_t seed = 0;
  int workers = 0;
};

int run_synth(const SynthArgs& a) {
  fe::TamperSpec spec;
  spec.kind = fe::parse_tamper(a.kind);
  spec.area_min = a.area_min;
  spec.area_max = a.area_max;
  spec.seed = a.seed;
  const fe::Manifest m = fe::build_test_corpus(a.count, a.width, a.height, spec, a.out, a.workers);

  json config;
  config["out"] = path_text(a.out);
  config["count"] = a.count;
  config["width"] = a.width;
  config["height"] = a.height;
  config["kind"] = std::string(fe::tamper_name(spec.kind));
  config["area_min"] = a.area_min;
  config["area_max"] = a.area_max;
  config["seed"] = a.seed;
  json inputs = json::object();
  json body;
  body["manifest"] = fe::sha256_file(a.out / "manifest.json");
  body["prediction_sets"] = {"perfect", "empty", "complement"};
  write_json(a.out / "synth_report.json", with_envelope(body, envelope("synth", config, inputs)));
  std::cout << "wrote " << m.samples.size() << " " << fe::tamper_name(spec.kind)
            << " samples to " << path_text(a.out) << "\n";
  return 0;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  fs::path out;
  std::string kind;
  std::vector<double> levels;
  std::vector<fs::path> reports;
};

int run_report(const ReportArgs& a) {
  if (a.levels.size() != a.reports.size()) {
    throw fe::Error("got " + std::to_string(a.reports.size()) + " reports for " +
                    std::to_string(a.levels.size()) + " levels");
  }
  std::vector<json> docs;
  json inputs = json::object();
  for (const auto& path : a.reports) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fe::ParseError("cannot open report " + path_text(path));
    try {
      docs.push_back(json::parse(in));
    } catch (const json::exception& e) {
      throw fe::ParseError(path_text(path) + ": " + e.what());
    }
    inputs[path_text(path)] = fe::sha256_file(path);
  }
  const fe::PerturbKind kind = fe::parse_kind(a.kind);
  const fe::RobustnessCurve curve = fe::curve_from_reports(kind, a.levels, docs);

  json config;
  config["out"] = path_text(a.out);
  config["kind"] = std::string(fe::kind_name(kind));
  config["levels"] = a.levels;
  json reports = json::array();
  for (const auto& p : a.reports) reports.push_back(path_text(p));
  config["reports"] = std::move(reports);

  fs::create_directories(a.out);
  fe::write_text(a.out / "curve.csv", fe::curve_to_csv(curve));
  fe::write_text(a.out / "curve_wide.csv", fe::curve_to_wide_csv(curve));
  write_json(a.out / "curve.json", with_envelope(fe::curve_to_json(curve), envelope("report", config, inputs)));

  auto header = fe::metric_columns(curve.variants);
  header.insert(header.begin(), "level");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    std::vector<std::string> row{fe::level_label(curve.levels[i])};
    for (std::size_t c = 1; c < header.size(); ++c) {
      row.push_back(fixed_or_na(fe::metric_value(curve.points[i].metrics, header[c])));
    }
    rows.push_back(std::move(row));
  }
  print_table(header, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation and dataset-hygiene engine for image manipulation detection"};
  app.name("forensic-eval");
  app.set_version_flag("--version", std::string(fe::kVersion));
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);

  const auto kinds = CLI::IsMember({"gaussian_blur", "blur", "gaussian_noise", "noise",
                                    "jpeg_compress", "jpeg"});
  const std::string workers_help = "worker threads (default: $FORENSIC_EVAL_WORKERS, then all cores)";

  auto* manifest_cmd = app.add_subcommand("manifest", "build or validate a dataset manifest");
  manifest_cmd->require_subcommand(1);
  ManifestBuildArgs build_args;
  auto* build = manifest_cmd->add_subcommand("build", "write a manifest for an images/ + masks/ tree");
  build->add_option("--dir", build_args.dir, "dataset directory")->required();
  build->add_option("--out", build_args.out, "output directory for manifest.json")->required();
  build->add_option("--dataset", build_args.dataset, "dataset name (default: directory name)");
  ManifestValidateArgs validate_args;
  auto* validate = manifest_cmd->add_subcommand("validate", "check a manifest file or a dataset directory");
  validate->add_option("path", validate_args.target, "manifest file or dataset directory")->required();
  validate->add_flag("--skip-files", validate_args.skip_files, "do not check that referenced files exist");

  auto* eval_cmd = app.add_subcommand("eval", "compute evaluation metrics");
  eval_cmd->require_subcommand(1);
  PixelArgs pixel_args;
  auto* pixel = eval_cmd->add_subcommand("pixel", "pixel-level localization metrics");
  pixel->add_option("--manifest", pixel_args.manifest, "manifest file")->required();
  pixel->add_option("--preds", pixel_args.preds, "directory of <id>.png or <id>.f32 predictions")->required();
  pixel->add_option("--out", pixel_args.out, "report directory")->required();
  pixel->add_option("--threshold", pixel_args.threshold, "score >= threshold is manipulated")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pixel->add_option("--mask-threshold", pixel_args.mask_threshold, "ground-truth binarization threshold")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pixel->add_option("--variants", pixel_args.variants,
                    "F1 variants: all, none or a list of invert,permute,macro,micro,weighted")
      ->capture_default_str();
  pixel->add_option("--aggregate", pixel_args.aggregate, "mean (per image) or global (summed counts)")
      ->check(CLI::IsMember({"mean", "global"}))->capture_default_str();
  pixel->add_option("--shape", pixel_args.shape, "size mismatch handling: strict, pad or resize")
      ->check(CLI::IsMember({"strict", "pad", "resize"}))->capture_default_str();
  pixel->add_flag("--invert-gt", pixel_args.invert_gt, "ground truth marks authentic pixels as 1");
  pixel->add_flag("--invert-pred", pixel_args.invert_pred, "predictions score authenticity");
  pixel->add_flag("--no-auc", pixel_args.no_auc, "skip AUC");
  pixel->add_option("--workers", pixel_args.workers, workers_help);

  ImageArgs image_args;
  auto* image = eval_cmd->add_subcommand("image", "image-level detection metrics");
  image->add_option("--manifest", image_args.manifest, "manifest file")->required();
  image->add_option("--scores", image_args.scores, "CSV with header id,score")->required();
  image->add_option("--out", image_args.out, "report directory")->required();
  image->add_option("--threshold", image_args.threshold, "score >= threshold is manipulated")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();

  PerturbArgs perturb_args;
  auto* perturb = app.add_subcommand("perturb", "write blurred, noisy or recompressed copies of a corpus");
  perturb->add_option("--manifest", perturb_args.manifest, "manifest file")->required();
  perturb->add_option("--out", perturb_args.out, "output directory")->required();
  perturb->add_option("--kind", perturb_args.kind, "gaussian_blur, gaussian_noise or jpeg_compress")
      ->required()->check(kinds);
  perturb->add_option("--levels", perturb_args.levels, "comma-separated levels (default per kind)")
      ->delimiter(',');
  perturb->add_option("--seed", perturb_args.seed, "random seed")->required();
  perturb->add_option("--workers", perturb_args.workers, workers_help);

  CleanseArgs cleanse_args;
  auto* cleanse = app.add_subcommand("cleanse", "group near-duplicate manipulated images by SSIM");
  cleanse->add_option("--manifest", cleanse_args.manifest, "manifest file")->required();
  cleanse->add_option("--out", cleanse_args.out, "output directory")->required();
  cleanse->add_option("--threshold", cleanse_args.threshold, "SSIM threshold in (0,1]")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cleanse->add_option("--resize", cleanse_args.resize, "comparison resolution W,H")
      ->delimiter(',')->expected(2)->check(CLI::PositiveNumber)->capture_default_str();
  cleanse->add_option("--workers", cleanse_args.workers, workers_help);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic tampered corpus with prediction sets");
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("--count", synth_args.count, "number of samples")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--width", synth_args.width, "image width")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--height", synth_args.height, "image height")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--kind", synth_args.kind, "copy_move or inpaint")
      ->check(CLI::IsMember({"copy_move", "copy-move", "inpaint"}))->capture_default_str();
  synth->add_option("--area-min", synth_args.area_min, "smallest tampered area fraction")->capture_default_str();
  synth->add_option("--area-max", synth_args.area_max, "largest tampered area fraction")->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "random seed")->required();
  synth->add_option("--workers", synth_args.workers, workers_help);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "merge per-level pixel reports into a robustness curve");
  report->add_option("--out", report_args.out, "output directory")->required();
  report->add_option("--kind", report_args.kind, "perturbation kind")->required()->check(kinds);
  report->add_option("--levels", report_args.levels, "comma-separated levels, one per report")
      ->required()->delimiter(',');
  report->add_option("--reports", report_args.reports, "pixel_report.json files in level order")
      ->required()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build) return run_manifest_build(build_args);
    if (*validate) return run_manifest_validate(validate_args);
    if (*pixel) return run_eval_pixel(pixel_args);
    if (*image) return run_eval_image(image_args);
    if (*perturb) return run_perturb(perturb_args);
    if (*cleanse) return run_cleanse(cleanse_args);
    if (*synth) return run_synth(synth_args);
    if (*report) return run_report(report_args);
  } catch (const fe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
