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
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "qsphere/spectral.hpp"

namespace qsphere {

// Fixture measures. All carry equal weights 1/N.
DiscreteMeasure gen_point_mass(const SpherePoint& x0);
DiscreteMeasure gen_uniform(int n, std::size_t count, std::uint64_t seed);
/// Uniform measure on the copy of S^{4k-1} where coordinates k+1..n vanish.
DiscreteMeasure gen_subsphere(int n, int k, std::size_t count, std::uint64_t seed);
/// Uniform measure on the orbit {q x0 : |q| = 1}, a round 3-sphere.
DiscreteMeasure gen_sp1_orbit(const SpherePoint& x0, std::size_t count, std::uint64_t seed);

struct DimensionEstimate {
  double s_hat = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double residual = 0.0;  // RMS residual of the log-log fit
  std::size_t samples = 0;
  bool degenerate = false;
  std::vector<double> radii;
  std::vector<double> correlation;  // C(r) on radii

  nlohmann::json to_json() const;
  void write_csv(std::ostream& out) const;
};

struct CorrelationOptions {
  /// Explicit radii; empty selects 16 log-spaced radii in
  /// [2 * median NN distance, diameter / 4].
  std::vector<double> radii;
  /// Reference atoms the pair sums are taken over (subsampled by seed).
  std::size_t references = 2000;
};

/// Slope of log C(r) against log r with C(r) = sum_{a != b} w_a w_b [|y_a - y_b| < r]
/// (chordal distance), clamped to [0, 4n - 1]. All-equal atoms give s_hat = 0
/// with `degenerate` set. Needs >= 1000 atoms and nonnegative weights.
DimensionEstimate correlation_dimension(const DiscreteMeasure& mu, std::uint64_t seed,
                                        const CorrelationOptions& opts = {});

/// sum_{a != b} w_a w_b |y_a - y_b|^{-s}; +inf if two atoms coincide.
double s_energy(const DiscreteMeasure& mu, double s);

struct ConsistencyReport {
  std::string measure;
  int n = 2;
  double epsilon = 0.1;
  int h_max = 0;
  bool cone_condition_plausible = false;
  std::optional<double> dim_estimate;
  double bound = 0.0;  // 4n - 4
  bool consistent = true;
  std::vector<SpectrumEntry> in_cone_nonzero_high;  // flagged in-cone entries with 2h >= h_max
  SpectrumReport spectrum;
  std::optional<DimensionEstimate> dimension;

  nlohmann::json to_json() const;
};

/// Tolerance on the dimension estimate before a fixture counts as violating
/// the lower bound.
inline constexpr double kDimensionTolerance = 0.4;

/// Falsification harness for "finite in-cone spectrum implies dim >= 4n - 4":
/// scans the spectrum, estimates the dimension and reports consistent = false
/// only if the in-cone spectrum looks bounded (no flagged in-cone index with
/// 2h >= h_max) while the dimension estimate falls below 4n - 4 - tolerance.
ConsistencyReport theorem_consistency_report(const DiscreteMeasure& mu, const KernelSet& kernels, double eps,
                                             int h_max, int probes, std::uint64_t seed);

}  // namespace qsphere
