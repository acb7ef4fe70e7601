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

#include "qsphere/sphere.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

double& component(Quaternion& q, std::size_t c) {
  switch (c) {
    case 0: return q.re;
    case 1: return q.im_i;
    case 2: return q.im_j;
    default: return q.im_k;
  }
}

double component(const Quaternion& q, std::size_t c) {
  switch (c) {
    case 0: return q.re;
    case 1: return q.im_i;
    case 2: return q.im_j;
    default: return q.im_k;
  }
}

void require_same_size(const HVector& a, const HVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("HVector length mismatch");
}

}  // namespace

HVector HVector::from_ambient(std::span<const double> xs) {
  if (xs.size() % 4 != 0) throw std::invalid_argument("ambient length must be a multiple of 4");
  HVector v(xs.size() / 4);
  for (std::size_t r = 0; r < xs.size(); ++r) v.ambient(r) = xs[r];
  return v;
}

HVector HVector::basis(std::size_t n, std::size_t index) {
  if (index >= n) throw std::invalid_argument("basis index out of range");
  HVector v(n);
  v[index] = Quaternion::one();
  return v;
}

double HVector::ambient(std::size_t r) const { return component(coords_.at(r / 4), r % 4); }
double& HVector::ambient(std::size_t r) { return component(coords_.at(r / 4), r % 4); }

std::vector<double> HVector::to_ambient() const {
  std::vector<double> out(ambient_dim());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = ambient(r);
  return out;
}

HVector& HVector::operator+=(const HVector& o) {
  require_same_size(*this, o);
  for (std::size_t l = 0; l < size(); ++l) coords_[l] += o.coords_[l];
  return *this;
}

HVector& HVector::operator-=(const HVector& o) {
  require_same_size(*this, o);
  for (std::size_t l = 0; l < size(); ++l) coords_[l] = coords_[l] - o.coords_[l];
  return *this;
}

HVector& HVector::operator*=(double s) {
  for (auto& q : coords_) q = s * q;
  return *this;
}

HVector operator+(HVector a, const HVector& b) { return a += b; }
HVector operator-(HVector a, const HVector& b) { return a -= b; }
HVector operator*(double s, HVector v) { return v *= s; }

HVector left_mul(const Quaternion& q, const HVector& v) {
  HVector out(v.size());
  for (std::size_t l = 0; l < v.size(); ++l) out[l] = q * v[l];
  return out;
}

Quaternion inner(const HVector& x, const HVector& y) {
  require_same_size(x, y);
  Quaternion acc;
  for (std::size_t l = 0; l < x.size(); ++l) acc += x[l] * conj(y[l]);
  return acc;
}

double dot(const HVector& x, const HVector& y) {
  require_same_size(x, y);
  double acc = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    acc += x[l].re * y[l].re + x[l].im_i * y[l].im_i + x[l].im_j * y[l].im_j + x[l].im_k * y[l].im_k;
  }
  return acc;
}

double norm(const HVector& v) { return std::sqrt(dot(v, v)); }

SpherePoint::SpherePoint(HVector v) : v_(std::move(v)) {
  const double r = norm(v_);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("SpherePoint: vector must be finite and nonzero");
  }
  v_ *= 1.0 / r;
}

double chordal_distance(const SpherePoint& x, const SpherePoint& y) { return norm(x.vec() - y.vec()); }

SpherePoint flow(const SpherePoint& x, Axis axis, double t) {
  const Quaternion u = (-t) * axis_unit(axis);
  return SpherePoint(left_mul(exp_imag(u), x.vec()));
}

std::vector<HVector> tangent_frame(const SpherePoint& y) {
  const std::size_t n = y.n();
  const std::size_t dim = 4 * n;
  std::vector<HVector> basis;
  basis.reserve(dim);
  basis.push_back(y.vec());

  // Orthonormalize v against everything accepted so far (two passes of
  // modified Gram-Schmidt); returns false when v is numerically dependent.
  auto accept = [&](HVector v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= dot(v, b) * b;
    }
    const double r = norm(v);
    if (r < 1e-8) return false;
    basis.push_back((1.0 / r) * v);
    return true;
  };

  for (Axis a : {Axis::i, Axis::j, Axis::k}) {
    accept(left_mul(axis_unit(a), y.vec()));
  }
  for (std::size_t r = 0; r < dim && basis.size() < dim; ++r) {
    HVector e(n);
    e.ambient(r) = 1.0;
    accept(std::move(e));
  }
  if (basis.size() != dim) throw std::logic_error("tangent_frame: failed to complete basis");
  basis.erase(basis.begin());
  return basis;
}

SpherePoint geodesic(const SpherePoint& y, const HVector& e, double t) {
  if (std::abs(dot(e, y.vec())) > 1e-10 || std::abs(norm(e) - 1.0) > 1e-10) {
    throw std::invalid_argument("geodesic: direction must be a unit tangent vector");
  }
  return SpherePoint(std::cos(t) * y.vec() + std::sin(t) * e);
}

SpherePoint random_point(std::size_t n, Engine& eng) {
  std::normal_distribution<double> gauss;
  HVector g(n);
  for (auto& q : g.coords_mut()) q = {gauss(eng), gauss(eng), gauss(eng), gauss(eng)};
  return SpherePoint(std::move(g));
}

std::vector<SpherePoint> sample_sphere(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_sphere: n must be >= 2");
  if (count < 1) throw std::invalid_argument("sample_sphere: N must be >= 1");
  std::vector<SpherePoint> out(count, SpherePoint(HVector::basis(n, 0)));
  const std::size_t chunks = chunk_count(count, kSampleChunk);
  parallel_chunks(chunks, [&](std::size_t c) {
    Engine eng = make_stream(seed, c);
    const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
    for (std::size_t p = c * kSampleChunk; p < end; ++p) out[p] = random_point(n, eng);
  });
  return out;
}

namespace {

// Nested uniform scramble of a 32-bit Sobol coordinate (hash-based Owen
// scrambling: bit-reverse, Laine-Karras permutation, bit-reverse).
std::uint32_t laine_karras(std::uint32_t x, std::uint32_t seed) {
  x += seed;
  x ^= x * 0x6c50b47cu;
  x ^= x * 0xb82f1e52u;
  x ^= x * 0xc7afe638u;
  x ^= x * 0x8d22f6e6u;
  return x;
}

std::uint32_t reverse_bits(std::uint32_t x) {
  x = ((x >> 1) & 0x55555555u) | ((x & 0x55555555u) << 1);
  x = ((x >> 2) & 0x33333333u) | ((x & 0x33333333u) << 2);
  x = ((x >> 4) & 0x0f0f0f0fu) | ((x & 0x0f0f0f0fu) << 4);
  x = ((x >> 8) & 0x00ff00ffu) | ((x & 0x00ff00ffu) << 8);
  return (x >> 16) | (x << 16);
}

}  // namespace

std::vector<SpherePoint> sample_sphere_sobol(std::size_t n, unsigned log2_count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_sphere_sobol: n must be >= 2");
  if (log2_count > 30) throw std::invalid_argument("sample_sphere_sobol: at most 2^30 points");
  const std::size_t dim = 4 * n;
  const std::size_t count = std::size_t{1} << log2_count;
  std::vector<std::uint32_t> scramble(dim);
  for (std::size_t d = 0; d < dim; ++d) scramble[d] = static_cast<std::uint32_t>(derive_seed(seed, d));

  boost::random::sobol_engine<std::uint32_t, 32> gen(dim);
  std::vector<double> xs(dim);
  std::vector<SpherePoint> out;
  out.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t d = 0; d < dim; ++d) {
      const std::uint32_t v = reverse_bits(laine_karras(reverse_bits(gen()), scramble[d]));
      const double u = (static_cast<double>(v) + 0.5) * 0x1p-32;
      xs[d] = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
    }
    out.emplace_back(HVector::from_ambient(xs));
  }
  return out;
}

}  // namespace qsphere
