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

#include "forensic_eval/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fe {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FORENSIC_EVAL_WORKERS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
      // fall through to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

}  // namespace fe
