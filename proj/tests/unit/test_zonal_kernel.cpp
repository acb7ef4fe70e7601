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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "qsphere/random.hpp"
#include "qsphere/sphere.hpp"
#include "qsphere/zonal_kernel.hpp"
#include "support.hpp"

using namespace qsphere;
using qsphere::testing::exact_constant;
using qsphere::testing::weyl_dim_n2;
using qsphere::testing::zonal_expectation;

TEST_CASE("index set and enumeration") {
  CHECK(enumerate_indices(2, 6).size() == 16u);
  CHECK(enumerate_indices(2, 8).size() == 25u);
  const auto idx = enumerate_indices(3, 5);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    CHECK(flat_position(idx[i].h, idx[i].m) == i);
    CHECK(in_index_set(idx[i].h, idx[i].m));
  }
  CHECK(!in_index_set(3, 2));
  CHECK_THROWS_AS(in_index_set(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(KernelIndex::make(3, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(KernelIndex::make(3, 1, 1), std::invalid_argument);
}

TEST_CASE("eigenvalues attached to an index") {
  const auto k = KernelIndex::make(3, 1, 2);
  CHECK(k.lambda_delta() == 27.0);
  CHECK(k.lambda_gamma() == 3.0);
  CHECK(KernelIndex::make(4, 2, 2).lambda_gamma() == 0.0);
}

TEST_CASE("literal prefactor vanishes at (1,0) only") {
  CHECK(raw_prefactor(KernelIndex::make(1, 0, 2)) == 0.0);
  CHECK(raw_prefactor(KernelIndex::make(0, 0, 2)) == doctest::Approx(-1.0 / 6.0));
  CHECK(raw_prefactor(KernelIndex::make(3, 1, 2)) == doctest::Approx(2.0 * 4.0 / 6.0));
  CHECK(zonal_profile(KernelIndex::make(1, 0, 2), {0.5, 0.5}) != 0.0);
}

TEST_CASE("kernel depends on (x, y) only through <x, y>") {
  Engine eng = make_stream(21, 0);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const SpherePoint x = random_point(2, eng), y = random_point(2, eng);
    Quaternion q{g(eng), g(eng), g(eng), g(eng)};
    q = (1.0 / norm(q)) * q;
    // Same unit quaternion on the left of every coordinate of both points.
    const SpherePoint qx(left_mul(q, x.vec())), qy(left_mul(q, y.vec()));
    // Coordinate-wise right multiplication by unit quaternions.
    HVector xr = x.vec(), yr = y.vec();
    for (std::size_t c = 0; c < 2; ++c) {
      Quaternion p{g(eng), g(eng), g(eng), g(eng)};
      p = (1.0 / norm(p)) * p;
      xr.coords_mut()[c] = xr.coords()[c] * p;
      yr.coords_mut()[c] = yr.coords()[c] * p;
    }
    for (const auto& idx : enumerate_indices(2, 6)) {
      const double base = raw_kernel(idx, x, y);
      CHECK(raw_kernel(idx, qx, qy) == doctest::Approx(base).epsilon(1e-10).scale(1.0));
      CHECK(raw_kernel(idx, SpherePoint(xr), SpherePoint(yr)) == doctest::Approx(base).epsilon(1e-10).scale(1.0));
      // Hermitian symmetry: K(x, y) = K(y, x)
      CHECK(raw_kernel(idx, y, x) == doctest::Approx(base).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("normalized profiles have integer traces matching the Weyl dimensions") {
  for (const auto& idx : enumerate_indices(2, 8)) {
    const double dim = exact_constant(idx) * zonal_profile(idx, {1.0, 1.0});
    CHECK(dim == doctest::Approx(static_cast<double>(weyl_dim_n2(idx.h, idx.m))).epsilon(1e-10));
  }
  // n = 3: traces are still positive integers.
  for (const auto& idx : enumerate_indices(3, 5)) {
    const double dim = exact_constant(idx) * zonal_profile(idx, {1.0, 1.0});
    CHECK(dim > 0.5);
    CHECK(std::abs(dim - std::round(dim)) < 1e-8);
  }
}

TEST_CASE("zonal sections of distinct indices are orthogonal") {
  for (int n : {2, 3}) {
    const auto idx = enumerate_indices(n, 6);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        const double pij = zonal_expectation(n, [&](double a, double s) {
          return zonal_profile(idx[i], {a, s}) * zonal_profile(idx[j], {a, s});
        });
        const double pii = zonal_expectation(n, [&](double a, double s) {
          return std::pow(zonal_profile(idx[i], {a, s}), 2);
        });
        const double pjj = zonal_expectation(n, [&](double a, double s) {
          return std::pow(zonal_profile(idx[j], {a, s}), 2);
        });
        CHECK(std::abs(pij) / std::sqrt(pii * pjj) < 1e-10);
      }
    }
  }
}

TEST_CASE("profile table agrees with direct evaluation") {
  const ProfileTable table(3, 7);
  std::vector<double> out(table.size());
  for (double a : {-0.6, 0.0, 0.25, 0.8}) {
    const double s = std::min(1.0, a * a + 0.15);
    table.evaluate({a, s}, out);
    const auto idx = enumerate_indices(3, 7);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      CHECK(out[i] == doctest::Approx(zonal_profile(idx[i], {a, s})).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("Monte Carlo calibration matches the quadrature constant") {
  const auto points = mc_sample(2, 200000, 77);
  for (const auto& idx : {KernelIndex::make(0, 0, 2), KernelIndex::make(2, 1, 2), KernelIndex::make(4, 0, 2),
                          KernelIndex::make(5, 2, 2)}) {
    const auto ck = calibrate(idx, points, 77, 32);
    CHECK(ck.usable());
    CHECK(ck.spread < kMaxCalibrationSpread);
    CHECK(ck.probes == 32);
    const double exact = exact_constant(idx);
    // Mean of 32 ratios: allow 4 standard errors of the mean plus 0.5%.
    CHECK(std::abs(ck.c / exact - 1.0) < 4.0 * ck.spread / std::sqrt(32.0) + 0.005);
  }
  CHECK(calibrate(KernelIndex::make(0, 0, 2), points, 77, 8).c == doctest::Approx(exact_constant(KernelIndex::make(0, 0, 2))));
}

TEST_CASE("calibration preconditions") {
  const auto idx = KernelIndex::make(2, 1, 2);
  CHECK_THROWS_AS(calibrate(idx, 5000, 1, 8), std::invalid_argument);
  CHECK_THROWS_AS(calibrate(idx, 20000, 1, 2), std::invalid_argument);
}

TEST_CASE("unusable kernels refuse evaluation") {
  auto ck = qsphere::testing::exact_kernel(KernelIndex::make(2, 1, 2));
  const SpherePoint x(HVector::basis(2, 0));
  CHECK(kernel(ck, x, x) == doctest::Approx(5.0));
  CHECK(kernel_dim(ck) == doctest::Approx(5.0));
  ck.spread = 0.2;
  CHECK(!ck.usable());
  CHECK_THROWS_AS(kernel(ck, x, x), UnusableKernel);
}

TEST_CASE("literal-formula constant") {
  const auto ck = qsphere::testing::exact_kernel(KernelIndex::make(3, 1, 2));
  REQUIRE(ck.c_raw().has_value());
  CHECK(*ck.c_raw() == doctest::Approx(1.5));
  CHECK(!qsphere::testing::exact_kernel(KernelIndex::make(1, 0, 2)).c_raw().has_value());
}

TEST_CASE("calibration cache round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "qsphere_cache_roundtrip.json").string();
  std::filesystem::remove(path);
  CHECK(KernelCache::load(path).size() == 0u);

  KernelCache cache;
  auto ck = qsphere::testing::exact_kernel(KernelIndex::make(4, 1, 2));
  ck.samples = 200000;
  ck.seed = 12345;
  ck.probes = 64;
  ck.spread = 0.0123;
  cache.put(ck);
  cache.put(qsphere::testing::exact_kernel(KernelIndex::make(0, 0, 2)));
  cache.save(path);
  const KernelCache back = KernelCache::load(path);
  CHECK(back.dump() == cache.dump());
  const auto got = back.get(KernelIndex::make(4, 1, 2));
  REQUIRE(got.has_value());
  CHECK(got->c == ck.c);
  CHECK(got->spread == ck.spread);
  CHECK(got->samples == 200000u);
  CHECK(got->seed == 12345u);
  CHECK(got->probes == 64);
  CHECK(!back.get(KernelIndex::make(4, 2, 2)).has_value());
  CHECK_THROWS_AS(KernelSet::from_cache(back, 2, 2), MissingCalibration);

  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(KernelCache::load(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << R"({"2/x/1": {"c": 1, "spread": 0, "N": 1, "seed": 1}})";
  }
  CHECK_THROWS_AS(KernelCache::load(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("kernel set evaluation") {
  const auto ks = qsphere::testing::exact_kernels(2, 4);
  CHECK(ks.size() == 9u);
  std::vector<double> out(ks.size());
  ks.evaluate({1.0, 1.0}, out);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& idx = ks.kernels()[i].index;
    CHECK(out[i] == doctest::Approx(static_cast<double>(weyl_dim_n2(idx.h, idx.m))));
    CHECK(ks.diagonal(i) == doctest::Approx(out[i]));
  }
  CHECK(ks.unusable().empty());
  CHECK_THROWS(ks.at(5, 0));
}
