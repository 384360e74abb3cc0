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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fe {

// Base class for every data-level failure the engine reports. The CLI maps
// anything derived from Error to the "data" exit code; everything else is
// treated as internal.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// AUC on a single-class ground truth.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "validation failed";
    for (const auto& item : items) out += "\n  " + item;
    return out;
  }

  std::vector<std::string> violations_;
};

class MissingPredictionsError : public Error {
 public:
  explicit MissingPredictionsError(std::vector<std::string> ids)
      : Error(describe(ids)), ids_(std::move(ids)) {}

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  static std::string describe(const std::vector<std::string>& ids) {
    std::string out = "missing prediction for " + std::to_string(ids.size()) + " sample(s):";
    for (const auto& id : ids) out += " " + id;
    return out;
  }

  std::vector<std::string> ids_;
};

// A per-item failure inside a batch, tagged with the item's position.
class BatchError : public Error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : Error("item " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace fe
