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

#include "forensic_eval/image_metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "forensic_eval/error.hpp"
#include "forensic_eval/pixel_metrics.hpp"
#include "forensic_eval/roc.hpp"

namespace fe {

ImageMetrics evaluate_image(std::span<const DetectionRecord> records, double threshold) {
  if (records.empty()) throw Error("image-level evaluation needs at least one record");
  ImageMetrics out;
  std::vector<float> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(records.size());
  labels.reserve(records.size());
  for (const auto& r : records) {
    const bool manipulated = r.label == Label::manipulated;
    const bool predicted = r.score >= threshold;
    if (predicted && manipulated) {
      ++out.counts.tp;
    } else if (predicted) {
      ++out.counts.fp;
    } else if (manipulated) {
      ++out.counts.fn;
    } else {
      ++out.counts.tn;
    }
    scores.push_back(static_cast<float>(r.score));
    labels.push_back(manipulated ? 1 : 0);
  }
  out.f1 = f1_binary(out.counts);
  out.accuracy = accuracy(out.counts);
  if (out.counts.positives() > 0 && out.counts.negatives() > 0) out.auc = auc(scores, labels);
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<DetectionRecord> parse_scores(std::string_view csv, const Manifest& manifest) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("scores CSV is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  if (trim(line) != "id,score") throw ParseError("scores CSV header must be 'id,score'");

  std::unordered_map<std::string, double> scores;
  std::vector<std::string> violations;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'id,score'");
    }
    const std::string id = trim(line.substr(0, comma));
    const std::string text = trim(line.substr(comma + 1));
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw ParseError("line " + std::to_string(line_no) + ": unparsable score '" + text + "'");
    }
    if (value < 0.0 || value > 1.0) {
      violations.push_back("id '" + id + "': score " + text + " outside [0,1]");
      continue;
    }
    if (!manifest.find(id)) {
      violations.push_back("id '" + id + "' not in manifest");
      continue;
    }
    if (!scores.emplace(id, value).second) violations.push_back("id '" + id + "' duplicated");
  }

  std::vector<DetectionRecord> records;
  records.reserve(manifest.samples.size());
  for (const auto& s : manifest.samples) {
    const auto it = scores.find(s.id);
    if (it == scores.end()) {
      violations.push_back("id '" + s.id + "' missing from scores");
      continue;
    }
    records.push_back({s.id, it->second, s.label});
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return records;
}

std::vector<DetectionRecord> load_scores(const std::filesystem::path& path, const Manifest& manifest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scores " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scores(buffer.str(), manifest);
}

nlohmann::json image_metrics_to_json(const ImageMetrics& m) {
  nlohmann::json j;
  j["f1"] = m.f1;
  j["auc"] = m.auc ? nlohmann::json(*m.auc) : nlohmann::json(nullptr);
  j["accuracy"] = m.accuracy;
  j["tp"] = m.counts.tp;
  j["tn"] = m.counts.tn;
  j["fp"] = m.counts.fp;
  j["fn"] = m.counts.fn;
  return j;
}

}  // namespace fe
