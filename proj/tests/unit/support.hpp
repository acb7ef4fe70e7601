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

// Test-side oracles shared by the unit tests.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "qsphere/zonal_kernel.hpp"

namespace qsphere::testing {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  std::vector<double> x(static_cast<std::size_t>(count));
  std::vector<double> w(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// E_y[f(a, s)] for y uniform on S^{4n-1}, a = Re<x,y>, s = |<x,y>|^2.
// s ~ Beta(2, 2n-2); given s, a = sqrt(s) cos(theta) with theta having density
// (2/pi) sin^2 on [0, pi]. Exact for polynomial f up to high degree.
inline double zonal_expectation(int n, const std::function<double(double, double)>& f) {
  static const auto gl = gauss_legendre(64);
  constexpr int kTheta = 96;
  double beta_norm = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.first.size(); ++i) {
    const double s = 0.5 * (gl.first[i] + 1.0);
    const double ws = 0.5 * gl.second[i] * s * std::pow(1.0 - s, 2 * n - 3);
    beta_norm += ws;
    double inner = 0.0;
    for (int t = 0; t < kTheta; ++t) {
      const double th = 2.0 * std::numbers::pi * t / kTheta;
      const double sn = std::sin(th);
      inner += f(std::sqrt(s) * std::cos(th), s) * sn * sn;
    }
    acc += ws * inner * 2.0 / kTheta;  // (1/pi) * (2 pi / kTheta)
  }
  return acc / beta_norm;
}

// Normalization making c * profile a reproducing kernel: c = p(1,1) / E[p^2].
inline double exact_constant(const KernelIndex& idx) {
  const double p2 = zonal_expectation(idx.n, [&](double a, double s) {
    const double p = zonal_profile(idx, {a, s});
    return p * p;
  });
  return zonal_profile(idx, {1.0, 1.0}) / p2;
}

inline CalibratedKernel exact_kernel(const KernelIndex& idx) {
  CalibratedKernel ck;
  ck.index = idx;
  ck.c = exact_constant(idx);
  ck.spread = 0.0;
  ck.samples = 0;
  ck.seed = 0;
  ck.probes = 0;
  return ck;
}

inline KernelSet exact_kernels(int n, int h_max) {
  std::vector<CalibratedKernel> ks;
  for (const auto& idx : enumerate_indices(n, h_max)) ks.push_back(exact_kernel(idx));
  return KernelSet(n, h_max, std::move(ks));
}

// dim H_{h,m} on S^7 from the Weyl dimension formula for the Sp(2) x Sp(1)
// representation with highest weight (h - m, m) tensored with the (h - 2m)-spin.
inline long weyl_dim_n2(int h, int m) {
  const long a = h - m;
  const long b = m;
  return (h - 2 * m + 1) * (a - b + 1) * (a + b + 3) * (a + 2) * (b + 1) / 6;
}

}  // namespace qsphere::testing
