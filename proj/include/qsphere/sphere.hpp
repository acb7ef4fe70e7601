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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "qsphere/quaternion.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

/// Point of H^n, stored as n quaternion coordinates (4n real components).
class HVector {
 public:
  HVector() = default;
  explicit HVector(std::size_t n) : coords_(n) {}
  explicit HVector(std::vector<Quaternion> coords) : coords_(std::move(coords)) {}
  HVector(std::initializer_list<Quaternion> coords) : coords_(coords) {}

  /// Build from 4n ambient real coordinates (re, i, j, k per quaternion).
  static HVector from_ambient(std::span<const double> xs);
  /// Standard basis vector: quaternion coordinate `index` equal to 1.
  static HVector basis(std::size_t n, std::size_t index);

  std::size_t size() const { return coords_.size(); }
  std::size_t ambient_dim() const { return 4 * coords_.size(); }
  const Quaternion& operator[](std::size_t l) const { return coords_[l]; }
  Quaternion& operator[](std::size_t l) { return coords_[l]; }
  std::span<const Quaternion> coords() const { return coords_; }
  std::span<Quaternion> coords_mut() { return coords_; }

  /// Real component r of the ambient R^{4n} embedding.
  double ambient(std::size_t r) const;
  double& ambient(std::size_t r);
  std::vector<double> to_ambient() const;

  HVector& operator+=(const HVector& o);
  HVector& operator-=(const HVector& o);
  HVector& operator*=(double s);

  friend bool operator==(const HVector&, const HVector&) = default;

 private:
  std::vector<Quaternion> coords_;
};

HVector operator+(HVector a, const HVector& b);
HVector operator-(HVector a, const HVector& b);
HVector operator*(double s, HVector v);

/// Left scalar multiplication q*(x_1, ..., x_n) = (q x_1, ..., q x_n).
HVector left_mul(const Quaternion& q, const HVector& v);

/// Quaternionic inner product sum_l x_l conj(y_l). Throws on length mismatch.
Quaternion inner(const HVector& x, const HVector& y);

/// Euclidean dot product in R^{4n}; equals Re inner(x, y).
double dot(const HVector& x, const HVector& y);
double norm(const HVector& v);

/// Unit vector of H^n. Construction renormalizes, so |norm - 1| <= 1e-12 holds
/// for every instance.
class SpherePoint {
 public:
  explicit SpherePoint(HVector v);

  const HVector& vec() const { return v_; }
  std::size_t n() const { return v_.size(); }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  HVector v_;
};

inline Quaternion inner(const SpherePoint& x, const SpherePoint& y) { return inner(x.vec(), y.vec()); }

/// Chordal distance in R^{4n}.
double chordal_distance(const SpherePoint& x, const SpherePoint& y);

/// x -> exp(-axis * t) x, the one-parameter group generating T_axis.
SpherePoint flow(const SpherePoint& x, Axis axis, double t);

/// 4n-1 orthonormal ambient vectors orthogonal to y. The first three are
/// i*y, j*y, k*y (orthonormalized) and span the Sp(1)-orbit directions; the
/// remaining 4n-4 span their orthogonal complement in the tangent space.
std::vector<HVector> tangent_frame(const SpherePoint& y);

/// Great circle cos(t) y + sin(t) e. Throws if e is not a unit tangent at y.
SpherePoint geodesic(const SpherePoint& y, const HVector& e, double t);

/// One uniform point drawn from eng.
SpherePoint random_point(std::size_t n, Engine& eng);

/// N i.i.d. points uniform w.r.t. the normalized surface measure of S^{4n-1}
/// (normalized Gaussian vectors). Deterministic in (n, N, seed).
std::vector<SpherePoint> sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed);

/// 2^log2_count points of an Owen-scrambled Sobol sequence in [0,1)^{4n},
/// mapped through the inverse normal CDF and normalized. Each point is
/// uniform on the sphere; the set is low-discrepancy. Independent seeds give
/// independent randomizations. Throws if n < 2 or log2_count > 30.
std::vector<SpherePoint> sample_sphere_sobol(std::size_t n, unsigned log2_count, std::uint64_t seed);

}  // namespace qsphere
