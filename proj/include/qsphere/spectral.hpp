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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsphere/sphere.hpp"
#include "qsphere/zonal_kernel.hpp"

namespace qsphere {

struct Atom {
  SpherePoint point;
  double weight = 0.0;
};

/// Finite weighted sum of point masses.
///
/// `replicates` = R >= 2 marks a discretization of some underlying measure:
/// the atoms form R equal contiguous groups, and R times any one group is an
/// independent unbiased estimate of that measure. Scans use the spread between
/// groups to remove the discretization floor. i.i.d. samples are the case
/// R = atom count. R = 0 means the atoms are the measure itself.
struct DiscreteMeasure {
  std::vector<Atom> atoms;
  std::string name;
  std::size_t replicates = 0;

  int n() const;
  bool sampled() const { return replicates >= 2; }
  /// Throws std::invalid_argument for an empty measure, mixed n, non-finite
  /// weights or a replicate count that does not divide the atom count.
  void validate() const;
  bool nonnegative() const;
  double total_variation() const;
  double sum_sq_weights() const;
};

/// alpha * mu + beta * nu as a single atom list.
DiscreteMeasure combine(double alpha, const DiscreteMeasure& mu, double beta, const DiscreteMeasure& nu);

struct ConeParams {
  double epsilon = 0.1;
  /// Throws std::invalid_argument unless 0 < epsilon < 1/2.
  void validate() const;
};

/// |m/h - 1/2| < eps, evaluated as |2m - h| < 2 eps h to keep integer
/// boundary cases exact. (0, 0) is never in the cone.
bool in_cone(int h, int m, double eps);

/// Smooth cutoff on (u, v) = (h, m): for u >= 1 a function of v/u only, equal to
/// 1 when |v/u - 1/2| <= eps/2 and 0 when |v/u - 1/2| >= eps; multiplied by a
/// smooth radial step that vanishes for u <= 0 and equals 1 for u >= 1.
double psi(double u, double v, double eps);

/// (pi_{h,m} mu)(x) = sum_a w_a kernel(x, y_a).
double project(const DiscreteMeasure& mu, const CalibratedKernel& ck, const SpherePoint& x);

struct ProjectionEstimate {
  double value = 0.0;
  double std_error = 0.0;  // std error of the atom sum viewed as an i.i.d. MC sum
};

ProjectionEstimate project_with_error(const DiscreteMeasure& mu, const CalibratedKernel& ck, const SpherePoint& x);

/// project() for every index of `kernels`, in flat order.
void project_all(const DiscreteMeasure& mu, const KernelSet& kernels, const SpherePoint& x, std::span<double> out);

struct SpectrumEntry {
  int h = 0;
  int m = 0;
  bool in_cone = false;
  double norm_sq = 0.0;
  /// Standard error of norm_sq if the component were zero (probe noise plus
  /// discretization noise); flagged_nonzero means norm_sq > 4 mc_stderr.
  double mc_stderr = 0.0;
  bool flagged_nonzero = false;
};

struct SpectrumReport {
  std::string measure;
  int n = 2;
  int h_max = 0;
  double epsilon = 0.1;
  int probes = 0;
  std::uint64_t seed = 0;
  std::string method;  // "probes" or "gram"
  std::vector<SpectrumEntry> entries;

  const SpectrumEntry& at(int h, int m) const;
  /// In-cone indices flagged nonzero.
  std::vector<SpectrumEntry> in_cone_nonzero() const;
  /// Sum of norm_sq over the shell h = h_max.
  double last_shell_energy() const;
};

nlohmann::json to_json(const SpectrumReport& r);
void write_csv(std::ostream& out, const SpectrumReport& r);

/// Replicated measures with at most this many groups get jackknife errors.
inline constexpr std::size_t kMaxJackknifeGroups = 64;

enum class ScanMethod {
  automatic,  // exact Gram sum when the measure has at most `probes` atoms
  probes,     // average of (pi mu)(x)^2 over uniform probe points
  gram,       // sum_{a,b} w_a w_b K(y_a, y_b), exact for the discrete measure
};

/// Estimates ||pi_{h,m} mu||^2_{L^2(sigma)} for every (h, m) with h <= h_max and
/// flags entries whose estimate exceeds 4 standard errors.
SpectrumReport spectrum_scan(const DiscreteMeasure& mu, const KernelSet& kernels, int h_max, double eps,
                             int probes, std::uint64_t seed, ScanMethod method = ScanMethod::automatic);

struct MultiplierValue {
  double value = 0.0;
  double tail = 0.0;  // |psi-weighted contribution of the shell h = h_max|
};

/// (L3 mu)(x) = sum_{h <= h_max} psi(h, m) (pi_{h,m} mu)(x).
MultiplierValue apply_multiplier(const DiscreteMeasure& mu, const KernelSet& kernels, double eps, int h_max,
                                 const SpherePoint& x);

/// L3 mu discretized as (L3 mu) d sigma on kMultiplierReplicates independently
/// scrambled Sobol point sets of 2^k points each, 2^k the smallest power of two
/// with R * 2^k >= samples. Weights are (L3 mu)(y) / (R 2^k).
inline constexpr std::size_t kMultiplierReplicates = 16;

DiscreteMeasure multiplier_measure(const DiscreteMeasure& mu, const KernelSet& kernels, double eps, int h_max,
                                   std::size_t samples, std::uint64_t seed);

/// (sqrt(a^2 + b^2) - b) / (2 sqrt(a^2 + b^2)) for a = |xi_1|, b = |xi_2|.
/// Throws std::invalid_argument if a, b < 0 or both vanish.
double cone_gap_check(double xi1_norm, double xi2_norm);

}  // namespace qsphere
