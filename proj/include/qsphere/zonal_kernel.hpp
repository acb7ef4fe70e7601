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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsphere/sphere.hpp"

namespace qsphere {

/// (h, m) in I_H = {2m <= h} for the sphere S^{4n-1}; labels the joint
/// eigenspace H_{h,m} of the Laplace-Beltrami operator and the sublaplacian.
struct KernelIndex {
  int h = 0;
  int m = 0;
  int n = 2;

  /// Validating constructor; throws std::invalid_argument outside I_H or for n < 2.
  static KernelIndex make(int h, int m, int n);

  double lambda_delta() const { return static_cast<double>(h) * (h + 4 * n - 2); }
  double lambda_gamma() const { return static_cast<double>(h - 2 * m) * (h - 2 * m + 2); }

  friend bool operator==(const KernelIndex&, const KernelIndex&) = default;
};

/// True iff 2m <= h. Throws std::invalid_argument for negative arguments.
bool in_index_set(int h, int m);

/// All (h, m) in I_H with h <= h_max, ordered by h then m.
std::vector<KernelIndex> enumerate_indices(int n, int h_max);

/// Position of (h, m) in enumerate_indices order.
std::size_t flat_position(int h, int m);

/// The two invariants a zonal kernel depends on: a = Re<x,y>, s = |<x,y>|^2.
struct ZonalArgs {
  double a = 1.0;
  double s = 1.0;
};

ZonalArgs zonal_args(const SpherePoint& x, const SpherePoint& y);

/// (h-2m+1)(h+2m-1) / ((2n-2)(2n-1)). Zero at (h, m) = (1, 0).
double raw_prefactor(const KernelIndex& idx);

/// C(h-m+2n-2, 2n-3) * W_{h-2m}(a, s) * P_m^{(2n-3, h-2m+1)}(2s-1): the kernel
/// formula without its rational prefactor.
double zonal_profile(const KernelIndex& idx, ZonalArgs z);

/// The literal kernel formula, raw_prefactor * zonal_profile.
double raw_kernel(const KernelIndex& idx, const SpherePoint& x, const SpherePoint& y);

/// Evaluates zonal_profile for every index with h <= h_max at once, sharing
/// the Chebyshev recurrence across m and caching Jacobi recurrence
/// coefficients.
class ProfileTable {
 public:
  ProfileTable() = default;
  ProfileTable(int n, int h_max);

  int n() const { return n_; }
  int h_max() const { return h_max_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<KernelIndex>& indices() const { return indices_; }

  /// out.size() must equal size().
  void evaluate(ZonalArgs z, std::span<double> out) const;

 private:
  struct Step {
    double c2x, c2c, c3;  // P_k = (c2x*x + c2c) P_{k-1} - c3 P_{k-2}, already divided
  };
  int n_ = 2;
  int h_max_ = 0;
  std::vector<KernelIndex> indices_;
  std::vector<double> binom_;             // per flat index
  std::vector<std::vector<Step>> steps_;  // per k = h - 2m, for degrees 2..m_max
  std::vector<double> p1_slope_, p1_icpt_;  // P_1 = slope*x + icpt, per k
};

/// Largest accepted relative spread of the per-probe calibration ratios.
inline constexpr double kMaxCalibrationSpread = 0.05;

/// c * zonal_profile is the reproducing kernel of pi_{h,m} w.r.t. the
/// normalized surface measure.
struct CalibratedKernel {
  KernelIndex index;
  double c = 0.0;
  double spread = 0.0;  // sample std / |mean| of per-probe ratios
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int probes = 0;

  bool usable() const { return c != 0.0 && std::isfinite(c) && spread < kMaxCalibrationSpread; }
  /// Constant relative to the literal formula, when its prefactor is nonzero.
  std::optional<double> c_raw() const;
};

class DegenerateProbes : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnusableKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo calibration: for probe pairs (x, z) with |<x,z>| in [0.3, 0.9],
/// A(x,z) = mean_y profile(x,y) profile(y,z) over uniform y and
/// c = mean of profile(x,z) / A(x,z). Requires N >= 1e4, probes >= 3.
CalibratedKernel calibrate(const KernelIndex& idx, std::size_t samples, std::uint64_t seed, int probes);

/// Same, reusing an existing uniform sample (must come from mc_sample(n, N, seed)
/// for the result to match the overload above).
CalibratedKernel calibrate(const KernelIndex& idx, std::span<const SpherePoint> mc_points,
                           std::uint64_t seed, int probes);

/// The uniform sample calibrate() integrates against.
std::vector<SpherePoint> mc_sample(int n, std::size_t samples, std::uint64_t seed);

/// c * zonal_profile. Throws UnusableKernel if !ck.usable().
double kernel(const CalibratedKernel& ck, const SpherePoint& x, const SpherePoint& y);
double kernel(const CalibratedKernel& ck, ZonalArgs z);

/// kernel(x, x) averaged over 10 random x; dim H_{h,m} up to calibration error.
double kernel_dim(const CalibratedKernel& ck);

/// Persisted calibration constants: JSON object keyed "n/h/m" with
/// {c, spread, N, seed, probes}.
class KernelCache {
 public:
  static std::string key(const KernelIndex& idx);

  /// Missing file yields an empty cache; malformed JSON throws std::runtime_error.
  static KernelCache load(const std::string& path);
  void save(const std::string& path) const;
  std::string dump() const;

  std::optional<CalibratedKernel> get(const KernelIndex& idx) const;
  void put(const CalibratedKernel& ck);
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, CalibratedKernel> entries_;
};

class MissingCalibration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calibrated kernels for every index with h <= h_max, evaluated in batch.
class KernelSet {
 public:
  KernelSet() = default;
  KernelSet(int n, int h_max, std::vector<CalibratedKernel> kernels);

  /// Calibrate each index with one shared uniform sample.
  static KernelSet calibrate_all(int n, int h_max, std::size_t samples, std::uint64_t seed, int probes);
  /// Throws MissingCalibration naming the absent keys.
  static KernelSet from_cache(const KernelCache& cache, int n, int h_max);

  int n() const { return table_.n(); }
  int h_max() const { return table_.h_max(); }
  std::size_t size() const { return kernels_.size(); }
  const std::vector<CalibratedKernel>& kernels() const { return kernels_; }
  const CalibratedKernel& at(int h, int m) const;
  /// Exact kernel diagonal c * profile(1, 1), i.e. the dimension estimate.
  double diagonal(std::size_t pos) const { return diag_[pos]; }

  /// Calibrated values kernel_{h,m}(z) for all indices, in flat order.
  void evaluate(ZonalArgs z, std::span<double> out) const;

  std::vector<KernelIndex> unusable() const;

 private:
  ProfileTable table_;
  std::vector<CalibratedKernel> kernels_;
  std::vector<double> diag_;
};

}  // namespace qsphere
