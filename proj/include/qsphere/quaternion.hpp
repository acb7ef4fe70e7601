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

namespace qsphere {

/// Real quaternion re + im_i*i + im_j*j + im_k*k.
struct Quaternion {
  double re = 0.0;
  double im_i = 0.0;
  double im_j = 0.0;
  double im_k = 0.0;

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// The three imaginary units generating the left Sp(1) action.
enum class Axis { i, j, k };

constexpr Quaternion axis_unit(Axis a) {
  switch (a) {
    case Axis::i: return Quaternion::unit_i();
    case Axis::j: return Quaternion::unit_j();
    case Axis::k: return Quaternion::unit_k();
  }
  return Quaternion::one();
}

constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.re + q.re, p.im_i + q.im_i, p.im_j + q.im_j, p.im_k + q.im_k};
}

constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.re - q.re, p.im_i - q.im_i, p.im_j - q.im_j, p.im_k - q.im_k};
}

constexpr Quaternion operator-(const Quaternion& q) { return {-q.re, -q.im_i, -q.im_j, -q.im_k}; }

constexpr Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.re, s * q.im_i, s * q.im_j, s * q.im_k};
}

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.re * q.re - p.im_i * q.im_i - p.im_j * q.im_j - p.im_k * q.im_k,
          p.re * q.im_i + p.im_i * q.re + p.im_j * q.im_k - p.im_k * q.im_j,
          p.re * q.im_j - p.im_i * q.im_k + p.im_j * q.re + p.im_k * q.im_i,
          p.re * q.im_k + p.im_i * q.im_j - p.im_j * q.im_i + p.im_k * q.re};
}

constexpr Quaternion& operator+=(Quaternion& p, const Quaternion& q) { return p = p + q; }

inline Quaternion quat_mul(const Quaternion& p, const Quaternion& q) { return p * q; }

constexpr Quaternion conj(const Quaternion& q) { return {q.re, -q.im_i, -q.im_j, -q.im_k}; }

constexpr double norm_sq(const Quaternion& q) {
  return q.re * q.re + q.im_i * q.im_i + q.im_j * q.im_j + q.im_k * q.im_k;
}

inline double norm(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

/// exp of a pure-imaginary quaternion u: cos|u| + (u/|u|) sin|u|.
/// Throws std::invalid_argument when u has a nonzero real part.
Quaternion exp_imag(const Quaternion& u);

}  // namespace qsphere
