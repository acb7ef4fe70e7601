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

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qsphere {

/// Parameters shared by every CLI command.
struct RunConfig {
  int n = 2;
  int h_max = 8;
  double epsilon = 0.1;
  std::size_t mc_samples = 200000;
  int probes = 64;        // calibration probe pairs
  int scan_probes = 256;  // probe points for spectrum scans
  std::size_t atoms = 100000;  // fixture size
  std::uint64_t seed = 12345;
  double fd_step = 1e-2;
  std::string cache_path = "qsphere_cache.json";
  std::string output_path;
  int threads = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (h_max < 0) throw std::invalid_argument("h-max must be >= 0");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    if (mc_samples < 10000) throw std::invalid_argument("mc-samples must be >= 10000");
    if (probes < 3) throw std::invalid_argument("probes must be >= 3");
    if (scan_probes < 2) throw std::invalid_argument("scan-probes must be >= 2");
    if (atoms < 1) throw std::invalid_argument("atoms must be >= 1");
    if (!(fd_step > 0.0 && fd_step <= 1.0)) throw std::invalid_argument("fd-step must lie in (0, 1]");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  }

  nlohmann::json to_json() const {
    return {{"n", n},           {"h_max", h_max},         {"epsilon", epsilon}, {"mc_samples", mc_samples},
            {"probes", probes}, {"scan_probes", scan_probes}, {"atoms", atoms},   {"seed", seed},
            {"fd_step", fd_step}};
  }
};

}  // namespace qsphere
