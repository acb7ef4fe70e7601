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
#include <numbers>
#include <random>
#include <stdexcept>

#include "qsphere/quaternion.hpp"
#include "qsphere/random.hpp"
#include "qsphere/sphere.hpp"

using namespace qsphere;

namespace {

Quaternion random_quat(Engine& eng) {
  std::normal_distribution<double> g;
  return {g(eng), g(eng), g(eng), g(eng)};
}

bool close(const Quaternion& p, const Quaternion& q, double tol) {
  return norm(p - q) <= tol * std::max(1.0, norm(q));
}

bool close(const HVector& a, const HVector& b, double tol) { return norm(a - b) <= tol; }

}  // namespace

TEST_CASE("Hamilton product table") {
  const Quaternion i = axis_unit(Axis::i), j = axis_unit(Axis::j), k = axis_unit(Axis::k);
  CHECK(close(i * j, k, 0.0));
  CHECK(close(j * k, i, 0.0));
  CHECK(close(k * i, j, 0.0));
  CHECK(close(j * i, -k, 0.0));
  CHECK(close(i * i, -Quaternion::one(), 0.0));
  CHECK(close(i * j * k, -Quaternion::one(), 0.0));
  CHECK(close(quat_mul(Quaternion{1, 2, 3, 4}, Quaternion{5, 6, 7, 8}), Quaternion{-60, 12, 30, 24}, 0.0));
}

TEST_CASE("norm is multiplicative and conjugation reverses products") {
  Engine eng = make_stream(7, 0);
  for (int t = 0; t < 200; ++t) {
    const Quaternion p = random_quat(eng), q = random_quat(eng), r = random_quat(eng);
    CHECK(norm(p * q) == doctest::Approx(norm(p) * norm(q)).epsilon(1e-12));
    CHECK(close(conj(p * q), conj(q) * conj(p), 1e-13));
    CHECK(close((p * q) * r, p * (q * r), 1e-12));
    CHECK(close(p * conj(p), Quaternion{norm_sq(p), 0, 0, 0}, 1e-13));
  }
}

TEST_CASE("exp of imaginary quaternions") {
  const Quaternion i = axis_unit(Axis::i);
  CHECK(close(exp_imag(std::numbers::pi / 2 * i), i, 1e-15));
  CHECK(close(exp_imag(Quaternion{}), Quaternion::one(), 0.0));
  Engine eng = make_stream(8, 0);
  for (int t = 0; t < 50; ++t) {
    Quaternion u = random_quat(eng);
    u.re = 0.0;
    CHECK(norm(exp_imag(u)) == doctest::Approx(1.0).epsilon(1e-14));
    // exp(u) exp(-u) = 1 for imaginary u
    CHECK(close(exp_imag(u) * exp_imag(-u), Quaternion::one(), 1e-14));
  }
  CHECK_THROWS_AS(exp_imag(Quaternion{0.5, 1, 0, 0}), std::invalid_argument);
}

TEST_CASE("SpherePoint normalizes and rejects degenerate input") {
  const double raw[8] = {3, 0, 0, 0, 4, 0, 0, 0};
  const SpherePoint p(HVector::from_ambient(raw));
  CHECK(norm(p.vec()) == doctest::Approx(1.0));
  CHECK(p.vec().coords()[0].re == doctest::Approx(0.6));
  const double zero[8] = {};
  CHECK_THROWS_AS(SpherePoint(HVector::from_ambient(zero)), std::invalid_argument);
  const double nan[8] = {std::nan(""), 1, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(SpherePoint(HVector::from_ambient(nan)), std::invalid_argument);
  CHECK_THROWS(HVector::from_ambient(std::vector<double>(7, 1.0)));
}

TEST_CASE("quaternionic inner product") {
  Engine eng = make_stream(9, 0);
  for (int t = 0; t < 50; ++t) {
    const SpherePoint x = random_point(3, eng), y = random_point(3, eng);
    CHECK(close(inner(x, y), conj(inner(y, x)), 1e-14));
    const Quaternion xx = inner(x, x);
    CHECK(xx.re == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(Quaternion{0, xx.im_i, xx.im_j, xx.im_k}) < 1e-15);
    // Re<x,y> is the ambient dot product.
    CHECK(inner(x, y).re == doctest::Approx(dot(x.vec(), y.vec())).epsilon(1e-14));
    // Quaternion scalars pull out on the left: <q x, y> = q <x, y>.
    const Quaternion q = random_quat(eng);
    CHECK(close(inner(left_mul(q, x.vec()), y.vec()), q * inner(x, y), 1e-13));
  }
  CHECK_THROWS_AS(inner(HVector::basis(2, 0), HVector::basis(3, 0)), std::invalid_argument);
}

TEST_CASE("Sp(1) flows form one-parameter groups") {
  Engine eng = make_stream(10, 0);
  const SpherePoint x = random_point(2, eng);
  for (Axis a : {Axis::i, Axis::j, Axis::k}) {
    CHECK(close(flow(x, a, 0.0).vec(), x.vec(), 0.0));
    CHECK(close(flow(flow(x, a, 0.3), a, 0.5).vec(), flow(x, a, 0.8).vec(), 1e-14));
    CHECK(close(flow(flow(x, a, 0.7), a, -0.7).vec(), x.vec(), 1e-14));
    CHECK(close(flow(x, a, 2 * std::numbers::pi).vec(), x.vec(), 1e-14));
    // Flow lines stay in the Sp(1)-orbit: |<x, flow(x)>| = 1.
    CHECK(norm(inner(x, flow(x, a, 1.1))) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(chordal_distance(x, flow(x, Axis::i, std::numbers::pi)) == doctest::Approx(2.0));
}

TEST_CASE("tangent frame is orthonormal with the orbit directions first") {
  Engine eng = make_stream(11, 0);
  for (std::size_t n : {2u, 3u}) {
    const SpherePoint y = random_point(n, eng);
    const auto frame = tangent_frame(y);
    REQUIRE(frame.size() == 4 * n - 1);
    for (std::size_t a = 0; a < frame.size(); ++a) {
      CHECK(dot(frame[a], y.vec()) == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
      for (std::size_t b = 0; b < frame.size(); ++b) {
        CHECK(dot(frame[a], frame[b]) == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-13));
      }
    }
    // i y, j y, k y lie in the span of the first three frame vectors.
    for (Axis ax : {Axis::i, Axis::j, Axis::k}) {
      const HVector v = left_mul(axis_unit(ax), y.vec());
      HVector proj = 0.0 * v;
      for (std::size_t a = 0; a < 3; ++a) proj += dot(v, frame[a]) * frame[a];
      CHECK(close(proj, v, 1e-13));
    }
  }
}

TEST_CASE("geodesics") {
  Engine eng = make_stream(12, 0);
  const SpherePoint y = random_point(2, eng);
  const auto frame = tangent_frame(y);
  const SpherePoint g = geodesic(y, frame[4], std::numbers::pi / 3);
  CHECK(dot(g.vec(), y.vec()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(geodesic(y, y.vec(), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(geodesic(y, 2.0 * frame[0], 0.1), std::invalid_argument);
}

TEST_CASE("uniform sampling is deterministic and centred") {
  const auto a = sample_sphere(2, 20000, 42);
  const auto b = sample_sphere(2, 20000, 42);
  const auto c = sample_sphere(2, 20000, 43);
  CHECK(close(a[12345].vec(), b[12345].vec(), 0.0));
  CHECK(!close(a[0].vec(), c[0].vec(), 1e-3));
  // E[y_1^2] = 1/8 per ambient coordinate on S^7; mean zero.
  double mean = 0.0, second = 0.0;
  for (const auto& p : a) {
    mean += p.vec().coords()[1].im_j;
    second += p.vec().coords()[1].im_j * p.vec().coords()[1].im_j;
  }
  mean /= a.size();
  second /= a.size();
  CHECK(std::abs(mean) < 4.0 * std::sqrt(0.125 / a.size()));
  CHECK(second == doctest::Approx(0.125).epsilon(0.03));
  CHECK_THROWS_AS(sample_sphere(1, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_sphere(2, 0, 1), std::invalid_argument);
}

TEST_CASE("scrambled Sobol points are uniform and low-discrepancy") {
  const auto a = sample_sphere_sobol(2, 14, 5);
  const auto b = sample_sphere_sobol(2, 14, 5);
  const auto c = sample_sphere_sobol(2, 14, 6);
  REQUIRE(a.size() == 16384u);
  CHECK(close(a[100].vec(), b[100].vec(), 0.0));
  CHECK(!close(a[100].vec(), c[100].vec(), 1e-3));
  // The second moment of one coordinate is integrated far better than by
  // i.i.d. sampling (whose std error here is about 1.4e-3).
  double second = 0.0;
  for (const auto& p : a) {
    CHECK(norm(p.vec()) == doctest::Approx(1.0).epsilon(1e-14));
    second += p.vec().coords()[0].re * p.vec().coords()[0].re;
  }
  CHECK(std::abs(second / a.size() - 0.125) < 3e-4);
  CHECK_THROWS_AS(sample_sphere_sobol(1, 4, 1), std::invalid_argument);
}

TEST_CASE("derived seeds are distinct") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Engine a = make_stream(3, 4), b = make_stream(3, 4), c = make_stream(3, 5);
  CHECK(a() == b());
  CHECK(a() != c());
}
