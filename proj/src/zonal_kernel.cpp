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

#include "qsphere/zonal_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "qsphere/ortho_poly.hpp"
#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

constexpr std::size_t kMcChunk = 8192;
constexpr double kProbeBandLo = 0.3;
constexpr double kProbeBandHi = 0.9;
// Probe pairs must carry a sizeable kernel value: the MC error of A(x,z) is
// roughly dim / sqrt(N), independent of z.
constexpr double kProbeMinRatio = 0.1;
constexpr std::size_t kProbeMaxDraws = 400000;

std::uint64_t index_tag(const KernelIndex& idx) {
  return (static_cast<std::uint64_t>(idx.n) << 40) ^ (static_cast<std::uint64_t>(idx.h) << 20) ^
         static_cast<std::uint64_t>(idx.m);
}

}  // namespace

KernelIndex KernelIndex::make(int h, int m, int n) {
  if (n < 2) throw std::invalid_argument("KernelIndex: n must be >= 2");
  if (!in_index_set(h, m)) throw std::invalid_argument("KernelIndex: (h, m) not in I_H");
  return {h, m, n};
}

bool in_index_set(int h, int m) {
  if (h < 0 || m < 0) throw std::invalid_argument("in_index_set: h and m must be nonnegative");
  return 2 * m <= h;
}

std::vector<KernelIndex> enumerate_indices(int n, int h_max) {
  std::vector<KernelIndex> out;
  for (int h = 0; h <= h_max; ++h) {
    for (int m = 0; 2 * m <= h; ++m) out.push_back(KernelIndex::make(h, m, n));
  }
  return out;
}

std::size_t flat_position(int h, int m) {
  std::size_t pos = 0;
  for (int hp = 0; hp < h; ++hp) pos += static_cast<std::size_t>(hp / 2 + 1);
  return pos + static_cast<std::size_t>(m);
}

ZonalArgs zonal_args(const SpherePoint& x, const SpherePoint& y) {
  const Quaternion q = inner(x, y);
  return {q.re, norm_sq(q)};
}

double raw_prefactor(const KernelIndex& idx) {
  const double num = static_cast<double>(idx.h - 2 * idx.m + 1) * (idx.h + 2 * idx.m - 1);
  const double den = static_cast<double>(2 * idx.n - 2) * (2 * idx.n - 1);
  return num / den;
}

double zonal_profile(const KernelIndex& idx, ZonalArgs z) {
  const int k = idx.h - 2 * idx.m;
  const double binom = static_cast<double>(binomial(idx.h - idx.m + 2 * idx.n - 2, 2 * idx.n - 3));
  const double s = std::min(z.s, 1.0);
  const double w = cheb_u_scaled(k, z.a, std::max(s, z.a * z.a));
  const double p = jacobi_eval({2.0 * idx.n - 3.0, k + 1.0, idx.m}, 2.0 * s - 1.0);
  return binom * w * p;
}

double raw_kernel(const KernelIndex& idx, const SpherePoint& x, const SpherePoint& y) {
  return raw_prefactor(idx) * zonal_profile(idx, zonal_args(x, y));
}

ProfileTable::ProfileTable(int n, int h_max) : n_(n), h_max_(h_max), indices_(enumerate_indices(n, h_max)) {
  binom_.reserve(indices_.size());
  for (const auto& idx : indices_) {
    binom_.push_back(static_cast<double>(binomial(idx.h - idx.m + 2 * n - 2, 2 * n - 3)));
  }
  const double alpha = 2.0 * n - 3.0;
  steps_.resize(static_cast<std::size_t>(h_max) + 1);
  p1_slope_.resize(steps_.size());
  p1_icpt_.resize(steps_.size());
  for (int k = 0; k <= h_max; ++k) {
    const double beta = k + 1.0;
    p1_slope_[k] = 0.5 * (alpha + beta + 2.0);
    p1_icpt_[k] = (alpha + 1.0) - 0.5 * (alpha + beta + 2.0);
    const int m_max = (h_max - k) / 2;
    for (int j = 2; j <= m_max; ++j) {
      const double s = 2.0 * j + alpha + beta;
      const double c1 = 2.0 * j * (j + alpha + beta) * (s - 2.0);
      steps_[k].push_back({(s - 1.0) * s * (s - 2.0) / c1, (s - 1.0) * (alpha * alpha - beta * beta) / c1,
                           2.0 * (j + alpha - 1.0) * (j + beta - 1.0) * s / c1});
    }
  }
}

void ProfileTable::evaluate(ZonalArgs z, std::span<double> out) const {
  const double s = std::clamp(z.s, 0.0, 1.0);
  const double a = z.a;
  const double x = 2.0 * s - 1.0;
  double w_prev = 0.0;
  double w = 1.0;
  for (int k = 0; k <= h_max_; ++k) {
    if (k == 1) {
      w_prev = 1.0;
      w = 2.0 * a;
    } else if (k > 1) {
      const double next = 2.0 * a * w - s * w_prev;
      w_prev = w;
      w = next;
    }
    const int m_max = (h_max_ - k) / 2;
    double p_prev = 0.0;
    double p = 1.0;
    for (int m = 0; m <= m_max; ++m) {
      if (m == 1) {
        p_prev = 1.0;
        p = p1_slope_[k] * x + p1_icpt_[k];
      } else if (m > 1) {
        const Step& st = steps_[k][m - 2];
        const double next = (st.c2x * x + st.c2c) * p - st.c3 * p_prev;
        p_prev = p;
        p = next;
      }
      const std::size_t pos = flat_position(k + 2 * m, m);
      out[pos] = binom_[pos] * w * p;
    }
  }
}

std::optional<double> CalibratedKernel::c_raw() const {
  const double pre = raw_prefactor(index);
  if (pre == 0.0) return std::nullopt;
  return c / pre;
}

std::vector<SpherePoint> mc_sample(int n, std::size_t samples, std::uint64_t seed) {
  return sample_sphere(static_cast<std::size_t>(n), samples, derive_seed(seed, 0x6d63));
}

CalibratedKernel calibrate(const KernelIndex& idx, std::size_t samples, std::uint64_t seed, int probes) {
  if (samples < 10000) throw std::invalid_argument("calibrate: need N >= 1e4");
  const auto points = mc_sample(idx.n, samples, seed);
  return calibrate(idx, points, seed, probes);
}

CalibratedKernel calibrate(const KernelIndex& idx, std::span<const SpherePoint> mc_points, std::uint64_t seed,
                           int probes) {
  if (probes < 3) throw std::invalid_argument("calibrate: need probes >= 3");
  if (mc_points.size() < 10000) throw std::invalid_argument("calibrate: need N >= 1e4");
  const std::size_t n = static_cast<std::size_t>(idx.n);

  Engine eng = make_stream(derive_seed(seed, index_tag(idx)), 0);
  auto draw = [&] { return random_point(n, eng); };

  const double diag = std::abs(zonal_profile(idx, {1.0, 1.0}));

  // Probe selection: each pair gets its own x so the ratio errors decorrelate.
  // z is rejection-sampled into the band with a kernel value that is not small;
  // if too few qualify, fall back to the largest in-band values seen.
  std::vector<SpherePoint> xs;
  std::vector<SpherePoint> zs;
  std::vector<std::tuple<double, SpherePoint, SpherePoint>> fallback;
  for (int q = 0; q < probes; ++q) {
    const SpherePoint x = draw();
    for (std::size_t draws = 0; draws < kProbeMaxDraws / static_cast<std::size_t>(probes); ++draws) {
      SpherePoint z = draw();
      const ZonalArgs za = zonal_args(x, z);
      const double r = std::sqrt(za.s);
      if (r < kProbeBandLo || r > kProbeBandHi) continue;
      const double v = std::abs(zonal_profile(idx, za));
      if (v >= kProbeMinRatio * diag) {
        xs.push_back(x);
        zs.push_back(std::move(z));
        break;
      }
      if (fallback.size() < 4096) fallback.emplace_back(v, x, std::move(z));
    }
  }
  if (zs.size() < static_cast<std::size_t>(probes)) {
    std::stable_sort(fallback.begin(), fallback.end(),
                     [](const auto& l, const auto& r) { return std::get<0>(l) > std::get<0>(r); });
    for (auto& [v, x, z] : fallback) {
      if (zs.size() == static_cast<std::size_t>(probes)) break;
      if (v > 0.0) {
        xs.push_back(x);
        zs.push_back(z);
      }
    }
  }
  if (zs.size() < 3) throw DegenerateProbes("calibrate: no usable probe pairs");

  const std::size_t p = zs.size();
  const std::size_t chunks = chunk_count(mc_points.size(), kMcChunk);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(p, 0.0));
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(mc_points.size(), (c + 1) * kMcChunk);
    auto& acc = partial[c];
    for (std::size_t i = c * kMcChunk; i < end; ++i) {
      const SpherePoint& y = mc_points[i];
      for (std::size_t q = 0; q < p; ++q) {
        acc[q] += zonal_profile(idx, zonal_args(xs[q], y)) * zonal_profile(idx, zonal_args(y, zs[q]));
      }
    }
  });
  std::vector<double> a(p, 0.0);
  for (const auto& part : partial) {
    for (std::size_t q = 0; q < p; ++q) a[q] += part[q];
  }

  std::vector<double> ratios;
  for (std::size_t q = 0; q < p; ++q) {
    a[q] /= static_cast<double>(mc_points.size());
    if (std::abs(a[q]) > 1e-300) ratios.push_back(zonal_profile(idx, zonal_args(xs[q], zs[q])) / a[q]);
  }
  if (ratios.size() < 3) throw DegenerateProbes("calibrate: MC integrals vanish at all probes");

  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size() - 1);

  CalibratedKernel ck;
  ck.index = idx;
  ck.c = mean;
  ck.spread = std::sqrt(var) / std::abs(mean);
  ck.samples = mc_points.size();
  ck.seed = seed;
  ck.probes = static_cast<int>(ratios.size());
  return ck;
}

double kernel(const CalibratedKernel& ck, ZonalArgs z) {
  if (!ck.usable()) {
    throw UnusableKernel("kernel " + KernelCache::key(ck.index) + " is not usable (calibration spread " +
                         std::to_string(ck.spread) + ")");
  }
  return ck.c * zonal_profile(ck.index, z);
}

double kernel(const CalibratedKernel& ck, const SpherePoint& x, const SpherePoint& y) {
  return kernel(ck, zonal_args(x, y));
}

double kernel_dim(const CalibratedKernel& ck) {
  const auto xs = sample_sphere(static_cast<std::size_t>(ck.index.n), 10, derive_seed(ck.seed, 0x646964));
  double acc = 0.0;
  for (const auto& x : xs) acc += kernel(ck, x, x);
  return acc / 10.0;
}

// ---------------------------------------------------------------------------
// Cache

std::string KernelCache::key(const KernelIndex& idx) {
  return std::to_string(idx.n) + "/" + std::to_string(idx.h) + "/" + std::to_string(idx.m);
}

KernelCache KernelCache::load(const std::string& path) {
  KernelCache cache;
  std::ifstream in(path);
  if (!in) return cache;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("calibration cache " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("calibration cache " + path + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    int n = 0, h = 0, m = 0;
    char s1 = 0, s2 = 0;
    std::istringstream ks(k);
    if (!(ks >> n >> s1 >> h >> s2 >> m) || s1 != '/' || s2 != '/') {
      throw std::runtime_error("calibration cache: bad key '" + k + "'");
    }
    CalibratedKernel ck;
    try {
      ck.index = KernelIndex::make(h, m, n);
      ck.c = v.at("c").get<double>();
      ck.spread = v.at("spread").get<double>();
      ck.samples = v.at("N").get<std::size_t>();
      ck.seed = v.at("seed").get<std::uint64_t>();
      ck.probes = v.value("probes", 0);
    } catch (const std::exception& e) {
      throw std::runtime_error("calibration cache: bad entry '" + k + "': " + e.what());
    }
    cache.entries_[k] = ck;
  }
  return cache;
}

std::string KernelCache::dump() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, ck] : entries_) {
    j[k] = {{"c", ck.c}, {"spread", ck.spread}, {"N", ck.samples}, {"seed", ck.seed}, {"probes", ck.probes}};
  }
  return j.dump(2) + "\n";
}

void KernelCache::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write calibration cache " + path);
  out << dump();
  if (!out) throw std::runtime_error("failed writing calibration cache " + path);
}

std::optional<CalibratedKernel> KernelCache::get(const KernelIndex& idx) const {
  auto it = entries_.find(key(idx));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void KernelCache::put(const CalibratedKernel& ck) { entries_[key(ck.index)] = ck; }

// ---------------------------------------------------------------------------
// KernelSet

KernelSet::KernelSet(int n, int h_max, std::vector<CalibratedKernel> kernels)
    : table_(n, h_max), kernels_(std::move(kernels)) {
  if (kernels_.size() != table_.size()) throw std::invalid_argument("KernelSet: wrong number of kernels");
  std::vector<double> prof(table_.size());
  table_.evaluate({1.0, 1.0}, prof);
  diag_.resize(kernels_.size());
  for (std::size_t i = 0; i < kernels_.size(); ++i) {
    if (!(kernels_[i].index == table_.indices()[i])) throw std::invalid_argument("KernelSet: index order mismatch");
    diag_[i] = kernels_[i].c * prof[i];
  }
}

KernelSet KernelSet::calibrate_all(int n, int h_max, std::size_t samples, std::uint64_t seed, int probes) {
  const auto points = mc_sample(n, samples, seed);
  std::vector<CalibratedKernel> ks;
  for (const auto& idx : enumerate_indices(n, h_max)) ks.push_back(calibrate(idx, points, seed, probes));
  return KernelSet(n, h_max, std::move(ks));
}

KernelSet KernelSet::from_cache(const KernelCache& cache, int n, int h_max) {
  std::vector<CalibratedKernel> ks;
  std::string missing;
  for (const auto& idx : enumerate_indices(n, h_max)) {
    if (auto ck = cache.get(idx)) {
      ks.push_back(*ck);
    } else {
      missing += (missing.empty() ? "" : ", ") + KernelCache::key(idx);
    }
  }
  if (!missing.empty()) {
    throw MissingCalibration("missing calibration for " + missing + "; run `qsphere calibrate` first");
  }
  return KernelSet(n, h_max, std::move(ks));
}

const CalibratedKernel& KernelSet::at(int h, int m) const {
  if (h < 0 || h > h_max() || !in_index_set(h, m)) throw std::out_of_range("KernelSet: index out of range");
  return kernels_[flat_position(h, m)];
}

void KernelSet::evaluate(ZonalArgs z, std::span<double> out) const {
  table_.evaluate(z, out);
  for (std::size_t i = 0; i < kernels_.size(); ++i) out[i] *= kernels_[i].c;
}

std::vector<KernelIndex> KernelSet::unusable() const {
  std::vector<KernelIndex> out;
  for (const auto& ck : kernels_) {
    if (!ck.usable()) out.push_back(ck.index);
  }
  return out;
}

}  // namespace qsphere
