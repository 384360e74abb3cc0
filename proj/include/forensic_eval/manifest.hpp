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
#include <string>
#include <string_view>
#include <vector>

namespace fe {

enum class Label : int { authentic = 0, manipulated = 1 };

struct SampleRecord {
  std::string id;
  std::filesystem::path image;                // relative to the manifest directory
  std::optional<std::filesystem::path> mask;  // present iff label == manipulated
  Label label = Label::authentic;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct Manifest {
  std::string dataset;
  std::vector<SampleRecord> samples;
  // Directory the relative sample paths resolve against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& relative) const {
    return base_dir / relative;
  }
  std::size_t manipulated_count() const;
  const SampleRecord* find(std::string_view id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// Reads and validates a manifest file; throws ParseError or ValidationError.
Manifest load_manifest(const std::filesystem::path& path);

// Parses manifest JSON text. base_dir is recorded for path resolution.
Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);

// Stable serialization: two-space indent, trailing newline, sample order kept.
std::string manifest_to_json(const Manifest& manifest);

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

// Schema-level violations (ids, label/mask coupling, path form). With
// check_files, also reports referenced files that do not exist on disk.
std::vector<std::string> validate_manifest(const Manifest& manifest, bool check_files = false);

}  // namespace fe
