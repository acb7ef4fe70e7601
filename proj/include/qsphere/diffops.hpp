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
#include <functional>
#include <string>
#include <utility>

#include <json.hpp>

#include "qsphere/sphere.hpp"
#include "qsphere/zonal_kernel.hpp"

namespace qsphere {

using SphereFunction = std::function<double(const SpherePoint&)>;

/// Finite-difference settings. Steps in [1e-4, 1e-1] are the intended
/// range; anything in (0, 1] is accepted so coarse steps can be tested.
struct FDConfig {
  double step = 1e-2;
  bool richardson = true;

  /// Throws std::invalid_argument unless 0 < step <= 1.
  void validate() const;
};

/// T_axis f(x) = d/dt f(exp(-axis t) x) at t = 0 (central difference).
double t_axis(const SphereFunction& f, const SpherePoint& x, Axis axis, const FDConfig& cfg = {});

/// Gamma f = -(T_i^2 + T_j^2 + T_k^2) f.
double gamma_apply(const SphereFunction& f, const SpherePoint& x, const FDConfig& cfg = {});

/// Laplace-Beltrami operator, sign chosen so eigenvalues are h(h + 4n - 2) >= 0:
/// minus the sum of second derivatives along geodesics in the 4n-1 directions
/// of tangent_frame(y).
double laplace_beltrami_apply(const SphereFunction& f, const SpherePoint& y, const FDConfig& cfg = {});

struct EigenReport {
  KernelIndex index;
  double lambda_delta_est = 0.0;
  double lambda_gamma_est = 0.0;
  double rel_err_delta = 0.0;  // |est - exact| / max(|exact|, 1)
  double rel_err_gamma = 0.0;
  int probes_used = 0;
};

nlohmann::json to_json(const EigenReport& r);

/// Applies both operators to y -> kernel(x0, y) at the probe points where
/// |f| > 0.1 max|f| over a pool of `probes` uniform points, and reports the
/// median ratios against h(h+4n-2) and (h-2m)(h-2m+2). Throws
/// DegenerateProbes if no probe survives the filter.
EigenReport eigencheck(const CalibratedKernel& ck, const SpherePoint& x0, int probes, const FDConfig& cfg,
                       std::uint64_t seed);

/// Eigenvalues of L1 = sqrt(Delta + (2n-1)^2) - (2n-1) and L2 = sqrt(1 + Gamma) - 1
/// on H_{h,m}; exactly (h, h - 2m).
std::pair<double, double> l1_l2_identity(int h, int m, int n);

}  // namespace qsphere
