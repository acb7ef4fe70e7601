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

#include "qsphere/dimension_lab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

DiscreteMeasure equal_weights(std::vector<SpherePoint> pts, std::string name) {
  DiscreteMeasure mu;
  mu.name = std::move(name);
  mu.replicates = pts.size() >= 2 ? pts.size() : 0;
  const double w = 1.0 / static_cast<double>(pts.size());
  mu.atoms.reserve(pts.size());
  for (auto& p : pts) mu.atoms.push_back({std::move(p), w});
  return mu;
}

// Flat row-major ambient coordinates, one row per atom.
std::vector<double> ambient_rows(const DiscreteMeasure& mu) {
  const std::size_t dim = 4 * static_cast<std::size_t>(mu.n());
  std::vector<double> out;
  out.reserve(dim * mu.atoms.size());
  for (const auto& a : mu.atoms) {
    for (const auto& q : a.point.vec().coords()) {
      out.insert(out.end(), {q.re, q.im_i, q.im_j, q.im_k});
    }
  }
  return out;
}

double dist_sq(const double* x, const double* y, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    const double d = x[r] - y[r];
    acc += d * d;
  }
  return acc;
}

}  // namespace

DiscreteMeasure gen_point_mass(const SpherePoint& x0) {
  DiscreteMeasure mu;
  mu.name = "point";
  mu.atoms.push_back({x0, 1.0});
  return mu;
}

DiscreteMeasure gen_uniform(int n, std::size_t count, std::uint64_t seed) {
  return equal_weights(sample_sphere(static_cast<std::size_t>(n), count, seed), "uniform");
}

DiscreteMeasure gen_subsphere(int n, int k, std::size_t count, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("gen_subsphere: need 1 <= k <= n");
  if (count < 1) throw std::invalid_argument("gen_subsphere: need N >= 1");
  std::vector<SpherePoint> pts(count, SpherePoint(HVector::basis(static_cast<std::size_t>(n), 0)));
  parallel_chunks(chunk_count(count, kSampleChunk), [&](std::size_t c) {
    Engine eng = make_stream(seed, c);
    std::normal_distribution<double> gauss;
    const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
    for (std::size_t p = c * kSampleChunk; p < end; ++p) {
      HVector v(static_cast<std::size_t>(n));
      for (int l = 0; l < k; ++l) v[static_cast<std::size_t>(l)] = {gauss(eng), gauss(eng), gauss(eng), gauss(eng)};
      pts[p] = SpherePoint(std::move(v));
    }
  });
  return equal_weights(std::move(pts), "subsphere:" + std::to_string(k));
}

DiscreteMeasure gen_sp1_orbit(const SpherePoint& x0, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gen_sp1_orbit: need N >= 1");
  std::vector<SpherePoint> pts(count, x0);
  parallel_chunks(chunk_count(count, kSampleChunk), [&](std::size_t c) {
    Engine eng = make_stream(seed, c);
    std::normal_distribution<double> gauss;
    const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
    for (std::size_t p = c * kSampleChunk; p < end; ++p) {
      const Quaternion g{gauss(eng), gauss(eng), gauss(eng), gauss(eng)};
      pts[p] = SpherePoint(left_mul((1.0 / norm(g)) * g, x0.vec()));
    }
  });
  return equal_weights(std::move(pts), "sp1-orbit");
}

nlohmann::json DimensionEstimate::to_json() const {
  return {{"s_hat", s_hat},         {"r_min", r_min},         {"r_max", r_max},
          {"residual", residual},   {"samples", samples},     {"degenerate", degenerate},
          {"radii", radii},         {"correlation", correlation}};
}

void DimensionEstimate::write_csv(std::ostream& out) const {
  out << "r,C\n" << std::setprecision(17);
  for (std::size_t i = 0; i < radii.size(); ++i) out << radii[i] << ',' << correlation[i] << '\n';
}

DimensionEstimate correlation_dimension(const DiscreteMeasure& mu, std::uint64_t seed,
                                        const CorrelationOptions& opts) {
  mu.validate();
  if (!mu.nonnegative()) throw std::invalid_argument("correlation_dimension: weights must be nonnegative");
  const std::size_t count = mu.atoms.size();
  const std::size_t dim = 4 * static_cast<std::size_t>(mu.n());
  const auto rows = ambient_rows(mu);

  DimensionEstimate est;
  est.samples = count;
  bool all_equal = true;
  for (std::size_t a = 1; a < count && all_equal; ++a) all_equal = dist_sq(&rows[0], &rows[a * dim], dim) == 0.0;
  if (all_equal) {
    est.degenerate = true;
    return est;
  }
  if (count < 1000) throw std::invalid_argument("correlation_dimension: need at least 1000 atoms");

  std::vector<std::size_t> refs(count);
  std::iota(refs.begin(), refs.end(), std::size_t{0});
  if (opts.references < count) {
    Engine eng = make_stream(seed, 0x726566);
    std::shuffle(refs.begin(), refs.end(), eng);
    refs.resize(opts.references);
    std::sort(refs.begin(), refs.end());
  }

  std::vector<double> radii = opts.radii;
  if (radii.empty()) {
    std::vector<double> nn(refs.size());
    std::vector<double> far(refs.size());
    parallel_chunks(refs.size(), [&](std::size_t i) {
      const double* x = &rows[refs[i] * dim];
      double best = std::numeric_limits<double>::infinity();
      double worst = 0.0;
      for (std::size_t b = 0; b < count; ++b) {
        if (b == refs[i]) continue;
        const double d = dist_sq(x, &rows[b * dim], dim);
        best = std::min(best, d);
        worst = std::max(worst, d);
      }
      nn[i] = std::sqrt(best);
      far[i] = std::sqrt(worst);
    });
    const std::size_t mid = nn.size() / 2;
    std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(mid), nn.end());
    const double diameter = *std::max_element(far.begin(), far.end());
    const double hi = diameter / 4.0;
    double lo = 2.0 * nn[mid];
    // Too little leverage between the discreteness floor and the saturation
    // ceiling; widen downwards.
    if (!(lo < 0.8 * hi)) lo = 0.5 * hi;
    constexpr int kGrid = 16;
    for (int g = 0; g < kGrid; ++g) {
      radii.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * g / (kGrid - 1)));
    }
  }
  std::sort(radii.begin(), radii.end());
  std::vector<double> radii_sq(radii.size());
  std::transform(radii.begin(), radii.end(), radii_sq.begin(), [](double r) { return r * r; });

  // counts[i][g]: weighted pair mass within radii[g] for reference i.
  std::vector<std::vector<double>> counts(refs.size(), std::vector<double>(radii.size(), 0.0));
  parallel_chunks(refs.size(), [&](std::size_t i) {
    const std::size_t a = refs[i];
    const double* x = &rows[a * dim];
    std::vector<double> hist(radii.size() + 1, 0.0);
    for (std::size_t b = 0; b < count; ++b) {
      if (b == a) continue;
      const double d = dist_sq(x, &rows[b * dim], dim);
      const auto g = static_cast<std::size_t>(std::upper_bound(radii_sq.begin(), radii_sq.end(), d) - radii_sq.begin());
      hist[g] += mu.atoms[b].weight;
    }
    // hist[g] holds distances in [radii[g-1], radii[g]), so the running sum
    // counts |y_a - y_b| < radii[g]
    double run = 0.0;
    for (std::size_t g = 0; g < radii.size(); ++g) {
      run += hist[g];
      counts[i][g] = mu.atoms[a].weight * run;
    }
  });
  double w_all = 0.0;
  for (const auto& at : mu.atoms) w_all += at.weight;
  double w_ref = 0.0;
  for (std::size_t a : refs) w_ref += mu.atoms[a].weight;
  std::vector<double> corr(radii.size(), 0.0);
  for (const auto& row : counts) {
    for (std::size_t g = 0; g < radii.size(); ++g) corr[g] += row[g];
  }
  for (auto& c : corr) c *= w_all / w_ref;

  std::vector<double> lx, ly;
  for (std::size_t g = 0; g < radii.size(); ++g) {
    if (corr[g] > 0.0 && radii[g] > 0.0) {
      lx.push_back(std::log(radii[g]));
      ly.push_back(std::log(corr[g]));
    }
  }
  est.radii = radii;
  est.correlation = corr;
  est.r_min = radii.front();
  est.r_max = radii.back();
  if (lx.size() < 2) {
    est.degenerate = true;
    return est;
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (my + slope * (lx[i] - mx));
    rss += e * e;
  }
  est.residual = std::sqrt(rss / k);
  est.s_hat = std::clamp(slope, 0.0, 4.0 * mu.n() - 1.0);
  return est;
}

double s_energy(const DiscreteMeasure& mu, double s) {
  mu.validate();
  if (!(s > 0.0)) throw std::invalid_argument("s_energy: s must be positive");
  if (!mu.nonnegative()) throw std::invalid_argument("s_energy: weights must be nonnegative");
  const std::size_t count = mu.atoms.size();
  const std::size_t dim = 4 * static_cast<std::size_t>(mu.n());
  const auto rows = ambient_rows(mu);
  std::vector<double> partial(count, 0.0);
  parallel_chunks(count, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < count; ++b) {
      if (b == a) continue;
      const double d2 = dist_sq(&rows[a * dim], &rows[b * dim], dim);
      const double w = mu.atoms[a].weight * mu.atoms[b].weight;
      if (w == 0.0) continue;
      acc += d2 == 0.0 ? std::numeric_limits<double>::infinity() : w * std::pow(d2, -0.5 * s);
    }
    partial[a] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

nlohmann::json ConsistencyReport::to_json() const {
  nlohmann::json high = nlohmann::json::array();
  for (const auto& e : in_cone_nonzero_high) high.push_back({e.h, e.m});
  nlohmann::json j = {{"measure", measure},
                      {"n", n},
                      {"epsilon", epsilon},
                      {"h_max", h_max},
                      {"cone_condition_plausible", cone_condition_plausible},
                      {"dim_estimate", dim_estimate ? nlohmann::json(*dim_estimate) : nlohmann::json(nullptr)},
                      {"bound_4n_minus_4", bound},
                      {"consistent", consistent},
                      {"in_cone_nonzero_high", high},
                      {"spectrum", qsphere::to_json(spectrum)}};
  if (dimension) j["dimension"] = dimension->to_json();
  return j;
}

ConsistencyReport theorem_consistency_report(const DiscreteMeasure& mu, const KernelSet& kernels, double eps,
                                             int h_max, int probes, std::uint64_t seed) {
  if (!mu.nonnegative()) throw std::invalid_argument("theorem_consistency_report: measure must be nonnegative");
  ConsistencyReport r;
  r.measure = mu.name;
  r.n = mu.n();
  r.epsilon = eps;
  r.h_max = h_max;
  r.bound = 4.0 * r.n - 4.0;
  r.spectrum = spectrum_scan(mu, kernels, h_max, eps, probes, derive_seed(seed, 1));
  for (const auto& e : r.spectrum.in_cone_nonzero()) {
    if (2 * e.h >= h_max) r.in_cone_nonzero_high.push_back(e);
  }
  r.cone_condition_plausible = r.in_cone_nonzero_high.empty();

  const bool coincident = std::all_of(mu.atoms.begin(), mu.atoms.end(),
                                      [&](const Atom& a) { return a.point == mu.atoms.front().point; });
  if (coincident || mu.atoms.size() >= 1000) {
    r.dimension = correlation_dimension(mu, derive_seed(seed, 2));
    r.dim_estimate = r.dimension->s_hat;
  }
  r.consistent = !(r.cone_condition_plausible && r.dim_estimate && *r.dim_estimate < r.bound - kDimensionTolerance);
  return r;
}

}  // namespace qsphere
