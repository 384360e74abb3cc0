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
#include <exception>
#include <vector>

#include <omp.h>

namespace fe {

// Resolves a requested worker count. Values <= 0 fall back to the
// FORENSIC_EVAL_WORKERS environment variable, then to the OpenMP default.
int resolve_workers(int requested);

// Runs body(i) for i in [0, n) on up to `workers` OpenMP threads. Every index
// is attempted; afterwards the exception raised by the lowest failing index,
// if any, is rethrown. Results must be written to pre-assigned slots.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  if (n == 0) return;
  std::vector<std::exception_ptr> failures(n);
  const int threads = resolve_workers(workers);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace fe
