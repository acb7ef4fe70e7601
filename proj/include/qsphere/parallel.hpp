// Copyright 2026 The qsphere Authors
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
#include <vector>

#include <omp.h>

namespace qsphere {

/// Cap the worker count used by all parallel loops (0 keeps the runtime default).
inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

/// Run body(chunk) for chunk in [0, chunks). Chunks must not share mutable state.
template <class Body>
void parallel_chunks(std::size_t chunks, Body&& body) {
  const auto count = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < count; ++c) {
    body(static_cast<std::size_t>(c));
  }
}

/// Deterministic reduction: per-chunk partials are combined in chunk order,
/// so the result is independent of the thread count.
template <class T, class Body>
T parallel_sum(std::size_t chunks, T zero, Body&& body) {
  std::vector<T> partial(chunks, zero);
  parallel_chunks(chunks, [&](std::size_t c) { partial[c] = body(c); });
  T total = zero;
  for (const auto& p : partial) total += p;
  return total;
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk) { return (n + chunk - 1) / chunk; }

}  // namespace qsphere
