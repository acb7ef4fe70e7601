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

#include "qsphere/diffops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsphere {

namespace {

// Second derivative at t = 0 of g, O(step^2) or O(step^4) with Richardson.
template <class G>
double second_derivative(const G& g, double g0, const FDConfig& cfg) {
  auto d2 = [&](double t) { return (g(t) - 2.0 * g0 + g(-t)) / (t * t); };
  const double coarse = d2(cfg.step);
  if (!cfg.richardson) return coarse;
  return (4.0 * d2(0.5 * cfg.step) - coarse) / 3.0;
}

template <class G>
double first_derivative(const G& g, const FDConfig& cfg) {
  auto d1 = [&](double t) { return (g(t) - g(-t)) / (2.0 * t); };
  const double coarse = d1(cfg.step);
  if (!cfg.richardson) return coarse;
  return (4.0 * d1(0.5 * cfg.step) - coarse) / 3.0;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

void FDConfig::validate() const {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("FDConfig: step must lie in (0, 1]");
}

double t_axis(const SphereFunction& f, const SpherePoint& x, Axis axis, const FDConfig& cfg) {
  cfg.validate();
  return first_derivative([&](double t) { return f(flow(x, axis, t)); }, cfg);
}

double gamma_apply(const SphereFunction& f, const SpherePoint& x, const FDConfig& cfg) {
  cfg.validate();
  const double f0 = f(x);
  double acc = 0.0;
  for (Axis a : {Axis::i, Axis::j, Axis::k}) {
    acc += second_derivative([&](double t) { return f(flow(x, a, t)); }, f0, cfg);
  }
  return -acc;
}

double laplace_beltrami_apply(const SphereFunction& f, const SpherePoint& y, const FDConfig& cfg) {
  cfg.validate();
  const double f0 = f(y);
  double acc = 0.0;
  for (const auto& e : tangent_frame(y)) {
    acc += second_derivative([&](double t) { return f(geodesic(y, e, t)); }, f0, cfg);
  }
  return -acc;
}

nlohmann::json to_json(const EigenReport& r) {
  return {{"index", {{"n", r.index.n}, {"h", r.index.h}, {"m", r.index.m}}},
          {"lambda_delta_est", r.lambda_delta_est},
          {"lambda_gamma_est", r.lambda_gamma_est},
          {"rel_err_delta", r.rel_err_delta},
          {"rel_err_gamma", r.rel_err_gamma}};
}

EigenReport eigencheck(const CalibratedKernel& ck, const SpherePoint& x0, int probes, const FDConfig& cfg,
                       std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("eigencheck: probes must be >= 1");
  cfg.validate();
  const SphereFunction f = [&](const SpherePoint& y) { return kernel(ck, x0, y); };
  const auto pool = sample_sphere(x0.n(), static_cast<std::size_t>(probes), seed);
  std::vector<double> values;
  values.reserve(pool.size());
  double vmax = 0.0;
  for (const auto& y : pool) {
    values.push_back(f(y));
    vmax = std::max(vmax, std::abs(values.back()));
  }
  std::vector<double> delta_ratios, gamma_ratios;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    if (!(std::abs(values[p]) > 0.1 * vmax)) continue;
    delta_ratios.push_back(laplace_beltrami_apply(f, pool[p], cfg) / values[p]);
    gamma_ratios.push_back(gamma_apply(f, pool[p], cfg) / values[p]);
  }
  if (delta_ratios.empty()) throw DegenerateProbes("eigencheck: kernel section vanishes at every probe");

  EigenReport r;
  r.index = ck.index;
  r.lambda_delta_est = median(delta_ratios);
  r.lambda_gamma_est = median(gamma_ratios);
  const double ld = ck.index.lambda_delta();
  const double lg = ck.index.lambda_gamma();
  r.rel_err_delta = std::abs(r.lambda_delta_est - ld) / std::max(std::abs(ld), 1.0);
  r.rel_err_gamma = std::abs(r.lambda_gamma_est - lg) / std::max(std::abs(lg), 1.0);
  r.probes_used = static_cast<int>(delta_ratios.size());
  return r;
}

std::pair<double, double> l1_l2_identity(int h, int m, int n) {
  const KernelIndex idx = KernelIndex::make(h, m, n);
  const double shift = 2.0 * n - 1.0;
  return {std::sqrt(idx.lambda_delta() + shift * shift) - shift, std::sqrt(1.0 + idx.lambda_gamma()) - 1.0};
}

}  // namespace qsphere
