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

#include "forensic_eval/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "forensic_eval/error.hpp"
#include "json.hpp"

namespace fe {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t Manifest::manipulated_count() const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const auto& s) {
    return s.label == Label::manipulated;
  }));
}

const SampleRecord* Manifest::find(std::string_view id) const {
  for (const auto& s : samples) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

std::string where(std::size_t index) { return "samples[" + std::to_string(index) + "]"; }

}  // namespace

Manifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed manifest JSON: ") + e.what());
  }

  std::vector<std::string> violations;
  Manifest manifest;
  manifest.base_dir = base_dir;

  if (!doc.is_object()) throw ValidationError({"manifest root must be an object"});
  if (!doc.contains("dataset") || !doc["dataset"].is_string()) {
    violations.emplace_back("missing or non-string field 'dataset'");
  } else {
    manifest.dataset = doc["dataset"].get<std::string>();
  }
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    violations.emplace_back("missing or non-array field 'samples'");
    throw ValidationError(std::move(violations));
  }

  const auto& samples = doc["samples"];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& entry = samples[i];
    if (!entry.is_object()) {
      violations.push_back(where(i) + ": not an object");
      continue;
    }
    SampleRecord record;
    bool ok = true;
    if (!entry.contains("id") || !entry["id"].is_string()) {
      violations.push_back(where(i) + ": missing or non-string field 'id'");
      ok = false;
    } else {
      record.id = entry["id"].get<std::string>();
    }
    if (!entry.contains("image") || !entry["image"].is_string()) {
      violations.push_back(where(i) + ": missing or non-string field 'image'");
      ok = false;
    } else {
      record.image = fs::path(entry["image"].get<std::string>());
    }
    if (!entry.contains("mask")) {
      violations.push_back(where(i) + ": missing field 'mask' (use null for authentic)");
      ok = false;
    } else if (entry["mask"].is_string()) {
      record.mask = fs::path(entry["mask"].get<std::string>());
    } else if (!entry["mask"].is_null()) {
      violations.push_back(where(i) + ": field 'mask' must be a string or null");
      ok = false;
    }
    if (!entry.contains("label") || !entry["label"].is_number_integer()) {
      violations.push_back(where(i) + ": missing or non-integer field 'label'");
      ok = false;
    } else {
      const auto label = entry["label"].get<long long>();
      if (label != 0 && label != 1) {
        violations.push_back(where(i) + ": label must be 0 or 1");
        ok = false;
      } else {
        record.label = label == 1 ? Label::manipulated : Label::authentic;
      }
    }
    if (ok) manifest.samples.push_back(std::move(record));
  }

  for (auto& v : validate_manifest(manifest)) violations.push_back(std::move(v));
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return manifest;
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifest " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path());
}

std::string manifest_to_json(const Manifest& manifest) {
  json samples = json::array();
  for (const auto& s : manifest.samples) {
    json entry;
    entry["id"] = s.id;
    entry["image"] = s.image.generic_string();
    entry["mask"] = s.mask ? json(s.mask->generic_string()) : json(nullptr);
    entry["label"] = static_cast<int>(s.label);
    samples.push_back(std::move(entry));
  }
  json doc;
  doc["dataset"] = manifest.dataset;
  doc["samples"] = std::move(samples);
  return doc.dump(2) + "\n";
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << manifest_to_json(manifest);
}

std::vector<std::string> validate_manifest(const Manifest& manifest, bool check_files) {
  std::vector<std::string> violations;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    const auto& s = manifest.samples[i];
    const std::string tag = where(i) + " (id '" + s.id + "')";
    if (s.id.empty()) violations.push_back(tag + ": empty id");
    if (!seen.insert(s.id).second) violations.push_back(tag + ": duplicate id");
    if (s.label == Label::manipulated && !s.mask) {
      violations.push_back(tag + ": label 1 requires a mask path");
    }
    if (s.label == Label::authentic && s.mask) {
      violations.push_back(tag + ": label 0 must not carry a mask path");
    }
    if (s.image.empty()) violations.push_back(tag + ": empty image path");
    if (s.image.is_absolute()) violations.push_back(tag + ": image path must be relative");
    if (s.mask && s.mask->is_absolute()) violations.push_back(tag + ": mask path must be relative");
    if (check_files) {
      if (!s.image.empty() && !fs::exists(manifest.resolve(s.image))) {
        violations.push_back(tag + ": image file not found: " + s.image.generic_string());
      }
      if (s.mask && !fs::exists(manifest.resolve(*s.mask))) {
        violations.push_back(tag + ": mask file not found: " + s.mask->generic_string());
      }
    }
  }
  return violations;
}

}  // namespace fe
