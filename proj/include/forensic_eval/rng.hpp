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

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace fe {

// Derives a per-stream seed from a user seed, a sample id and a stream index
// (e.g. the perturbation level). FNV-1a over the id, mixed through splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id, std::uint64_t stream = 0);

// Platform-stable random source. std::mt19937_64 output is fully specified by
// the standard; the distribution transforms below are written out explicitly
// because the standard library's distributions are implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Standard normal via the Box-Muller transform; pairs are cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace fe
