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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsphere/config.hpp"
#include "qsphere/zonal_kernel.hpp"

namespace qsphere {

struct CheckResult {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  nlohmann::json config;

  bool passed() const;
  std::vector<std::string> failed() const;
  nlohmann::json to_json() const;
};

/// MC estimate of the integral of K1(x, y) K2(y, z) over uniform y with its
/// standard error.
struct ReproductionEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

ReproductionEstimate kernel_product_integral(const CalibratedKernel& k1, const CalibratedKernel& k2,
                                             const SpherePoint& x, const SpherePoint& z,
                                             std::span<const SpherePoint> ys);

/// Probe pair for idempotency tests: |<x,z>| in [0.3, 0.9] and |K(x,z)| >=
/// 0.1 K(x,x) when such a pair can be found.
std::pair<SpherePoint, SpherePoint> idempotency_probe(const CalibratedKernel& ck, std::uint64_t seed);

/// Kernels with h <= h_max for the config: taken from `cache` where present,
/// calibrated otherwise.
KernelSet kernels_for(const RunConfig& cfg, int h_max, const KernelCache* cache);

/// Calibration sanity, orthogonality/idempotency, eigenvalue checks,
/// the L1/L2 identity, cutoff properties and the cone-gap limit. Kernels up
/// to min(h_max, 6) are used; `cache` entries take precedence over fresh
/// calibration so corrupted constants are caught.
VerifySummary run_verify(const RunConfig& cfg, const KernelCache* cache = nullptr);

}  // namespace qsphere
