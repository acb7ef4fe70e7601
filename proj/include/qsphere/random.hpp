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
#include <cstdint>
#include <random>

namespace qsphere {

using Engine = std::mt19937_64;

/// Independent engine for sub-stream `stream` of a run seeded with `seed`.
/// Every stochastic routine splits its work into fixed-size chunks, one stream
/// per chunk, so results do not depend on the number of worker threads.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

/// Derive a child seed; used to give named sub-computations disjoint streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Points per RNG stream in chunked sampling.
inline constexpr std::size_t kSampleChunk = 4096;

}  // namespace qsphere
