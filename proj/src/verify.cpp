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

#include "qsphere/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qsphere/diffops.hpp"
#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"
#include "qsphere/spectral.hpp"

namespace qsphere {

namespace {

constexpr int kVerifyHMax = 6;
constexpr int kOrthoHMax = 5;
constexpr int kOrthoPairs = 10;
constexpr int kEigenPool = 64;
constexpr double kEigenTolerance = 0.005;

CheckResult check_calibration(const KernelSet& ks) {
  CheckResult r{"calibration", true, nlohmann::json::array()};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& ck = ks.kernels()[i];
    const double diag = ks.diagonal(i);
    const double nearest = std::max(1.0, std::round(diag));
    const bool integral = std::abs(diag - nearest) <= 0.02 * nearest;
    const bool unit = !(ck.index.h == 0) || std::abs(diag - 1.0) <= 0.02;
    const bool ok = ck.usable() && integral && unit;
    r.passed = r.passed && ok;
    r.detail.push_back({{"h", ck.index.h},
                        {"m", ck.index.m},
                        {"c", ck.c},
                        {"spread", ck.spread},
                        {"diagonal", diag},
                        {"passed", ok}});
  }
  return r;
}

CheckResult check_reproduction(const RunConfig& cfg, const KernelSet& ks) {
  CheckResult r{"orthogonality_idempotency", true, nlohmann::json::array()};
  const auto ys = sample_sphere(static_cast<std::size_t>(cfg.n), cfg.mc_samples, derive_seed(cfg.seed, 0x6f7274));
  const int hmax = std::min(kOrthoHMax, ks.h_max());
  const auto indices = enumerate_indices(cfg.n, hmax);

  auto record = [&](const CalibratedKernel& k1, const CalibratedKernel& k2, std::uint64_t tag) {
    const bool same = k1.index == k2.index;
    const auto pair = sample_sphere(static_cast<std::size_t>(cfg.n), 2, derive_seed(cfg.seed, tag));
    auto [x, z] = same ? idempotency_probe(k1, derive_seed(cfg.seed, tag)) : std::pair{pair[0], pair[1]};
    const auto est = kernel_product_integral(k1, k2, x, z, ys);
    const double target = same ? kernel(k1, x, z) : 0.0;
    const double diff = std::abs(est.value - target);
    // A constant integrand has zero sample variance; compare exactly then.
    const double z_score = est.std_error > 0.0 ? diff / est.std_error : 0.0;
    const bool ok = est.std_error > 0.0 ? z_score < 4.0 : diff <= 1e-12 * std::max(1.0, std::abs(target));
    r.passed = r.passed && ok;
    r.detail.push_back({{"first", {k1.index.h, k1.index.m}},
                        {"second", {k2.index.h, k2.index.m}},
                        {"estimate", est.value},
                        {"target", target},
                        {"std_error", est.std_error},
                        {"z", z_score},
                        {"passed", ok}});
  };

  for (const auto& idx : indices) {
    const auto& ck = ks.at(idx.h, idx.m);
    record(ck, ck, 0x1000 + flat_position(idx.h, idx.m));
  }
  Engine eng = make_stream(derive_seed(cfg.seed, 0x7061697273), 0);
  std::uniform_int_distribution<std::size_t> pick(0, indices.size() - 1);
  for (int p = 0; p < kOrthoPairs; ++p) {
    std::size_t a = pick(eng);
    std::size_t b = pick(eng);
    while (b == a) b = pick(eng);
    record(ks.at(indices[a].h, indices[a].m), ks.at(indices[b].h, indices[b].m), 0x2000 + static_cast<std::uint64_t>(p));
  }
  return r;
}

CheckResult check_eigen(const RunConfig& cfg, const KernelSet& ks) {
  CheckResult r{"eigencheck", true, nlohmann::json::array()};
  const FDConfig fd{cfg.fd_step, true};
  for (const auto& ck : ks.kernels()) {
    const auto tag = derive_seed(cfg.seed, 0x3000 + flat_position(ck.index.h, ck.index.m));
    const SpherePoint x0 = sample_sphere(static_cast<std::size_t>(cfg.n), 1, tag)[0];
    const auto rep = eigencheck(ck, x0, kEigenPool, fd, derive_seed(tag, 1));
    const bool ok = rep.rel_err_delta < kEigenTolerance && rep.rel_err_gamma < kEigenTolerance;
    r.passed = r.passed && ok;
    auto j = to_json(rep);
    j["passed"] = ok;
    r.detail.push_back(j);
  }
  return r;
}

CheckResult check_l1_l2() {
  CheckResult r{"l1_l2_identity", true, {}};
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int h = 0; h <= 100; ++h) {
      for (int m = 0; 2 * m <= h; ++m) {
        const auto [l1, l2] = l1_l2_identity(h, m, n);
        worst = std::max({worst, std::abs(l1 - h), std::abs(l2 - (h - 2 * m))});
      }
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = {{"max_abs_error", worst}};
  return r;
}

// Largest |k-th finite difference / step^k| of g over [lo, hi].
double max_derivative(const std::function<double(double)>& g, double lo, double hi, double step, int order) {
  static constexpr double kCoeff[4][4] = {{1, 0, 0, 0}, {-1, 1, 0, 0}, {1, -2, 1, 0}, {-1, 3, -3, 1}};
  double worst = 0.0;
  for (double t = lo; t + order * step <= hi; t += step) {
    double acc = 0.0;
    for (int q = 0; q <= order; ++q) acc += kCoeff[order][q] * g(t + q * step);
    worst = std::max(worst, std::abs(acc) / std::pow(step, order));
  }
  return worst;
}

CheckResult check_psi(double eps) {
  CheckResult r{"psi_properties", true, {}};
  bool center = true;
  bool support = true;
  bool homogeneous = true;
  for (int h = 2; h <= 40; h += 2) center = center && psi(h, h / 2, eps) == 1.0;
  for (int h = 1; h <= 40; ++h) {
    for (int m = 0; 2 * m <= h; ++m) {
      if (!in_cone(h, m, eps)) support = support && psi(h, m, eps) == 0.0;
    }
  }
  for (double u = 1.0; u <= 10.0; u += 0.37) {
    for (double ratio = 0.0; ratio <= 0.5; ratio += 0.013) {
      homogeneous = homogeneous && std::abs(psi(2 * u, 2 * u * ratio, eps) - psi(u, u * ratio, eps)) <= 1e-12;
    }
  }
  // Bounded derivatives: halving the grid step must not inflate the maxima
  // of the first three difference quotients.
  nlohmann::json deriv = nlohmann::json::array();
  bool smooth = true;
  const double step = eps / 400.0;
  const std::function<double(double)> angular = [&](double v) { return psi(1.0, v, eps); };
  const std::function<double(double)> radial = [&](double u) { return psi(u, 0.5 * u, eps); };
  for (int order = 1; order <= 3; ++order) {
    const double a1 = max_derivative(angular, 0.5 - 1.5 * eps, 0.5, step, order);
    const double a2 = max_derivative(angular, 0.5 - 1.5 * eps, 0.5, 0.5 * step, order);
    const double r1 = max_derivative(radial, -0.25, 1.25, 0.01, order);
    const double r2 = max_derivative(radial, -0.25, 1.25, 0.005, order);
    const bool ok = a2 <= 1.5 * a1 && r2 <= 1.5 * r1;
    smooth = smooth && ok;
    deriv.push_back({{"order", order}, {"angular", a2}, {"radial", r2}, {"passed", ok}});
  }
  r.passed = center && support && homogeneous && smooth;
  r.detail = {{"one_on_center", center},
              {"zero_off_cone", support},
              {"zero_homogeneous", homogeneous},
              {"derivatives", deriv}};
  return r;
}

CheckResult check_cone_gap(double eps) {
  CheckResult r{"cone_gap_limit", true, nlohmann::json::array()};
  // psi(1, v) = 1 once |v - 1/2| < 2^-k / 2 <= eps / 2.
  const int k_elliptic = std::max(6, static_cast<int>(std::ceil(std::log2(1.0 / eps))));
  double prev = -1.0;
  for (int k = 1; k <= 20; ++k) {
    const double ratio = std::ldexp(1.0, -k);
    const double v = cone_gap_check(1.0, ratio);
    const bool ok = std::abs(v - 0.5) < ratio && v > prev && (k < k_elliptic || psi(1.0, v, eps) == 1.0);
    prev = v;
    r.passed = r.passed && ok;
    r.detail.push_back({{"k", k}, {"value", v}, {"psi", psi(1.0, v, eps)}, {"passed", ok}});
  }
  return r;
}

}  // namespace

bool VerifySummary::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifySummary::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

nlohmann::json VerifySummary::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"config", config}, {"checks", cs}, {"passed", passed()}, {"failed", failed()}};
}

ReproductionEstimate kernel_product_integral(const CalibratedKernel& k1, const CalibratedKernel& k2,
                                             const SpherePoint& x, const SpherePoint& z,
                                             std::span<const SpherePoint> ys) {
  constexpr std::size_t kChunk = 8192;
  struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    Moments& operator+=(const Moments& o) {
      sum += o.sum;
      sum_sq += o.sum_sq;
      return *this;
    }
  };
  const auto total = parallel_sum(chunk_count(ys.size(), kChunk), Moments{}, [&](std::size_t c) {
    Moments m;
    const std::size_t end = std::min(ys.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double v = kernel(k1, x, ys[i]) * kernel(k2, ys[i], z);
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  const double count = static_cast<double>(ys.size());
  const double mean = total.sum / count;
  const double var = std::max(0.0, (total.sum_sq / count - mean * mean) * count / (count - 1.0));
  return {mean, std::sqrt(var / count)};
}

std::pair<SpherePoint, SpherePoint> idempotency_probe(const CalibratedKernel& ck, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(ck.index.n);
  Engine eng = make_stream(seed, 0);
  const SpherePoint x = random_point(n, eng);
  const double diag = std::abs(kernel(ck, x, x));
  SpherePoint best = x;
  double best_val = -1.0;
  for (int draw = 0; draw < 200000; ++draw) {
    SpherePoint z = random_point(n, eng);
    const ZonalArgs za = zonal_args(x, z);
    const double r = std::sqrt(za.s);
    if (r < 0.3 || r > 0.9) continue;
    const double v = std::abs(kernel(ck, za));
    if (v >= 0.1 * diag) return {x, z};
    if (v > best_val) {
      best_val = v;
      best = z;
    }
  }
  return {x, best};
}

KernelSet kernels_for(const RunConfig& cfg, int h_max, const KernelCache* cache) {
  std::vector<SpherePoint> points;
  std::vector<CalibratedKernel> ks;
  for (const auto& idx : enumerate_indices(cfg.n, h_max)) {
    if (cache) {
      if (auto hit = cache->get(idx)) {
        ks.push_back(*hit);
        continue;
      }
    }
    if (points.empty()) points = mc_sample(cfg.n, cfg.mc_samples, cfg.seed);
    ks.push_back(calibrate(idx, points, cfg.seed, cfg.probes));
  }
  return KernelSet(cfg.n, h_max, std::move(ks));
}

VerifySummary run_verify(const RunConfig& cfg, const KernelCache* cache) {
  cfg.validate();
  VerifySummary s;
  s.config = cfg.to_json();
  const KernelSet ks = kernels_for(cfg, std::min(cfg.h_max, kVerifyHMax), cache);
  s.checks.push_back(check_calibration(ks));
  if (ks.unusable().empty()) {
    s.checks.push_back(check_reproduction(cfg, ks));
    s.checks.push_back(check_eigen(cfg, ks));
  } else {
    s.checks.push_back({"orthogonality_idempotency", false, {{"error", "unusable kernels"}}});
    s.checks.push_back({"eigencheck", false, {{"error", "unusable kernels"}}});
  }
  s.checks.push_back(check_l1_l2());
  s.checks.push_back(check_psi(cfg.epsilon));
  s.checks.push_back(check_cone_gap(cfg.epsilon));
  return s;
}

}  // namespace qsphere
