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

#include "qsphere/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

// exp(-1/t) based smooth step: 0 for t <= 0, 1 for t >= 1, C^infinity.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

constexpr std::uint64_t kProbeTag = 0x7363616e;

}  // namespace

int DiscreteMeasure::n() const {
  if (atoms.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
  return static_cast<int>(atoms.front().point.n());
}

void DiscreteMeasure::validate() const {
  const std::size_t dim = static_cast<std::size_t>(n());
  for (const auto& a : atoms) {
    if (a.point.n() != dim) throw std::invalid_argument("DiscreteMeasure: atoms live on different spheres");
    if (!std::isfinite(a.weight)) throw std::invalid_argument("DiscreteMeasure: non-finite weight");
  }
  if (replicates == 1 || (replicates > 1 && atoms.size() % replicates != 0)) {
    throw std::invalid_argument("DiscreteMeasure: replicate count must be 0 or >= 2 and divide the atom count");
  }
}

bool DiscreteMeasure::nonnegative() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.weight >= 0.0; });
}

double DiscreteMeasure::total_variation() const {
  double acc = 0.0;
  for (const auto& a : atoms) acc += std::abs(a.weight);
  return acc;
}

double DiscreteMeasure::sum_sq_weights() const {
  double acc = 0.0;
  for (const auto& a : atoms) acc += a.weight * a.weight;
  return acc;
}

DiscreteMeasure combine(double alpha, const DiscreteMeasure& mu, double beta, const DiscreteMeasure& nu) {
  DiscreteMeasure out;
  out.name = mu.name + "+" + nu.name;
  out.atoms.reserve(mu.atoms.size() + nu.atoms.size());
  const bool iid = mu.replicates == mu.atoms.size() && nu.replicates == nu.atoms.size();
  if (!iid && mu.sampled() && mu.replicates == nu.replicates) {
    // Merge group by group so the result keeps the replicate structure.
    const std::size_t r = mu.replicates;
    const std::size_t gm = mu.atoms.size() / r;
    const std::size_t gn = nu.atoms.size() / r;
    for (std::size_t g = 0; g < r; ++g) {
      for (std::size_t a = g * gm; a < (g + 1) * gm; ++a) out.atoms.push_back({mu.atoms[a].point, alpha * mu.atoms[a].weight});
      for (std::size_t a = g * gn; a < (g + 1) * gn; ++a) out.atoms.push_back({nu.atoms[a].point, beta * nu.atoms[a].weight});
    }
    out.replicates = r;
    return out;
  }
  for (const auto& a : mu.atoms) out.atoms.push_back({a.point, alpha * a.weight});
  for (const auto& a : nu.atoms) out.atoms.push_back({a.point, beta * a.weight});
  if (iid && mu.sampled() && nu.sampled()) out.replicates = out.atoms.size();
  return out;
}

void ConeParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
}

bool in_cone(int h, int m, double eps) {
  if (!in_index_set(h, m)) throw std::invalid_argument("in_cone: (h, m) not in I_H");
  if (h == 0) return false;
  return std::abs(2.0 * m - h) < 2.0 * eps * h;
}

double psi(double u, double v, double eps) {
  if (u <= 0.0) return 0.0;
  const double radial = smooth_step(u);
  const double dist = std::abs(2.0 * v - u) / (2.0 * u);
  return radial * smooth_step((eps - dist) / (0.5 * eps));
}

double project(const DiscreteMeasure& mu, const CalibratedKernel& ck, const SpherePoint& x) {
  double acc = 0.0;
  for (const auto& a : mu.atoms) acc += a.weight * kernel(ck, x, a.point);
  return acc;
}

ProjectionEstimate project_with_error(const DiscreteMeasure& mu, const CalibratedKernel& ck, const SpherePoint& x) {
  const std::size_t count = mu.atoms.size();
  std::vector<double> terms;
  terms.reserve(count);
  for (const auto& a : mu.atoms) terms.push_back(a.weight * kernel(ck, x, a.point));
  ProjectionEstimate est;
  for (double t : terms) est.value += t;
  if (count < 2) return est;
  const double mean = est.value / static_cast<double>(count);
  double ss = 0.0;
  for (double t : terms) ss += (t - mean) * (t - mean);
  est.std_error = std::sqrt(ss * static_cast<double>(count) / static_cast<double>(count - 1));
  return est;
}

void project_all(const DiscreteMeasure& mu, const KernelSet& kernels, const SpherePoint& x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> vals(kernels.size());
  for (const auto& a : mu.atoms) {
    kernels.evaluate(zonal_args(x, a.point), vals);
    for (std::size_t i = 0; i < vals.size(); ++i) out[i] += a.weight * vals[i];
  }
}

const SpectrumEntry& SpectrumReport::at(int h, int m) const {
  for (const auto& e : entries) {
    if (e.h == h && e.m == m) return e;
  }
  throw std::out_of_range("SpectrumReport: no entry for requested index");
}

std::vector<SpectrumEntry> SpectrumReport::in_cone_nonzero() const {
  std::vector<SpectrumEntry> out;
  for (const auto& e : entries) {
    if (e.in_cone && e.flagged_nonzero) out.push_back(e);
  }
  return out;
}

double SpectrumReport::last_shell_energy() const {
  double acc = 0.0;
  for (const auto& e : entries) {
    if (e.h == h_max) acc += e.norm_sq;
  }
  return acc;
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : r.entries) {
    rows.push_back({{"h", e.h},
                    {"m", e.m},
                    {"in_cone", e.in_cone},
                    {"norm_sq", e.norm_sq},
                    {"mc_stderr", e.mc_stderr},
                    {"flagged_nonzero", e.flagged_nonzero}});
  }
  nlohmann::json nonzero = nlohmann::json::array();
  for (const auto& e : r.in_cone_nonzero()) nonzero.push_back({e.h, e.m});
  return {{"measure", r.measure},
          {"n", r.n},
          {"h_max", r.h_max},
          {"epsilon", r.epsilon},
          {"probes", r.probes},
          {"seed", r.seed},
          {"method", r.method},
          {"entries", rows},
          {"in_cone_nonzero", nonzero},
          {"last_shell_energy", r.last_shell_energy()}};
}

void write_csv(std::ostream& out, const SpectrumReport& r) {
  out << "h,m,in_cone,norm_sq,mc_stderr,flagged_nonzero\n";
  out << std::setprecision(17);
  for (const auto& e : r.entries) {
    out << e.h << ',' << e.m << ',' << (e.in_cone ? 1 : 0) << ',' << e.norm_sq << ',' << e.mc_stderr << ','
        << (e.flagged_nonzero ? 1 : 0) << '\n';
  }
}

SpectrumReport spectrum_scan(const DiscreteMeasure& mu, const KernelSet& kernels, int h_max, double eps,
                             int probes, std::uint64_t seed, ScanMethod method) {
  mu.validate();
  ConeParams{eps}.validate();
  if (h_max < 0 || h_max > kernels.h_max()) throw std::invalid_argument("spectrum_scan: h_max exceeds kernel set");
  if (mu.n() != kernels.n()) throw std::invalid_argument("spectrum_scan: measure and kernels differ in n");
  if (probes < 2) throw std::invalid_argument("spectrum_scan: need at least 2 probes");
  for (const auto& idx : kernels.unusable()) {
    if (idx.h <= h_max) throw UnusableKernel("spectrum_scan: kernel " + KernelCache::key(idx) + " is unusable");
  }

  const std::size_t count = enumerate_indices(kernels.n(), h_max).size();
  const std::size_t full = kernels.size();
  const std::size_t atoms = mu.atoms.size();
  if (method == ScanMethod::automatic) {
    method = atoms <= static_cast<std::size_t>(probes) ? ScanMethod::gram : ScanMethod::probes;
  }

  // Replicated measures: M[i][r][s] = <g_r, g_s> for the group sums g_r of
  // index i (probe-averaged, or exact for Gram). The unbiased estimate is the
  // off-diagonal U-statistic R^2 sum_{r != s} M_rs / (R (R - 1)). For few
  // groups its error comes from a leave-one-group-out jackknife; for i.i.d.
  // samples (one atom per group) from the per-atom floor.
  const std::size_t reps = mu.replicates;
  const bool grouped = reps >= 2 && reps <= kMaxJackknifeGroups;
  const std::size_t group = reps >= 2 ? atoms / reps : atoms;
  const std::size_t ng = grouped ? reps : 1;
  const double rd = static_cast<double>(reps);

  // Per probe (or once for Gram): group Gram matrices and, for i.i.d. measures,
  // the diagonal sum_a (w_a K)^2.
  struct Accum {
    std::vector<double> sum;    // full: (sum_a w_a K)^2 summed
    std::vector<double> diag;   // full: sum over groups g_r^2
    std::vector<double> gram;   // full * ng * ng, only when grouped
  };
  auto make_accum = [&] {
    return Accum{std::vector<double>(full, 0.0), std::vector<double>(full, 0.0),
                 std::vector<double>(grouped ? full * ng * ng : 0, 0.0)};
  };
  std::vector<double> value(count, 0.0);
  std::vector<double> se(count, 0.0);
  std::vector<double> floor(count, 0.0);
  std::vector<double> jack_se(count, 0.0);

  auto finish_grouped = [&](const double* m, double& u, double& jse) {
    double total = 0.0;
    double dsum = 0.0;
    std::vector<double> row(ng, 0.0);
    for (std::size_t r = 0; r < ng; ++r) {
      for (std::size_t q = 0; q < ng; ++q) row[r] += m[r * ng + q];
      total += row[r];
      dsum += m[r * ng + r];
    }
    const double off = total - dsum;
    u = rd * off / (rd - 1.0);
    jse = 0.0;
    if (ng >= 3) {
      std::vector<double> loo(ng);
      double mean = 0.0;
      for (std::size_t r = 0; r < ng; ++r) {
        loo[r] = rd * rd * (off - 2.0 * (row[r] - m[r * ng + r])) / ((rd - 1.0) * (rd - 2.0));
        mean += loo[r];
      }
      mean /= rd;
      double ss = 0.0;
      for (double v : loo) ss += (v - mean) * (v - mean);
      jse = std::sqrt((rd - 1.0) / rd * ss);
    }
  };

  if (method == ScanMethod::gram) {
    // Row a: sum_b w_a w_b K(y_a, y_b) split by the group of b.
    std::vector<std::vector<double>> rows(atoms, std::vector<double>(full * ng, 0.0));
    parallel_chunks(atoms, [&](std::size_t a) {
      std::vector<double> vals(full);
      for (std::size_t b = 0; b < atoms; ++b) {
        kernels.evaluate(zonal_args(mu.atoms[a].point, mu.atoms[b].point), vals);
        const double w = mu.atoms[a].weight * mu.atoms[b].weight;
        const std::size_t gb = grouped ? b / group : 0;
        for (std::size_t i = 0; i < full; ++i) rows[a][i * ng + gb] += w * vals[i];
      }
    });
    Accum acc = make_accum();
    for (std::size_t a = 0; a < atoms; ++a) {
      const std::size_t ga = grouped ? a / group : 0;
      for (std::size_t i = 0; i < full; ++i) {
        for (std::size_t gb = 0; gb < ng; ++gb) {
          acc.sum[i] += rows[a][i * ng + gb];
          if (grouped) acc.gram[(i * ng + ga) * ng + gb] += rows[a][i * ng + gb];
        }
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (grouped) {
        finish_grouped(&acc.gram[i * ng * ng], value[i], jack_se[i]);
        floor[i] = acc.sum[i] - value[i];
      } else if (reps >= 2) {
        // i.i.d.: the self-pairs w_a^2 K(y_a, y_a) are the floor.
        floor[i] = mu.sum_sq_weights() * kernels.diagonal(i);
        value[i] = acc.sum[i] - floor[i];
      } else {
        value[i] = acc.sum[i];
      }
    }
  } else {
    const auto xs = sample_sphere(static_cast<std::size_t>(mu.n()), static_cast<std::size_t>(probes),
                                  derive_seed(seed, kProbeTag));
    std::vector<Accum> per(xs.size());
    parallel_chunks(xs.size(), [&](std::size_t p) {
      Accum acc = make_accum();
      std::vector<double> vals(full);
      std::vector<double> g(full * ng, 0.0);
      std::vector<double> total(full, 0.0);
      for (std::size_t a = 0; a < atoms; ++a) {
        kernels.evaluate(zonal_args(xs[p], mu.atoms[a].point), vals);
        const double w = mu.atoms[a].weight;
        const std::size_t ga = grouped ? a / group : 0;
        for (std::size_t i = 0; i < full; ++i) {
          const double t = w * vals[i];
          total[i] += t;
          if (grouped) g[i * ng + ga] += t;
          if (reps >= 2 && !grouped) acc.diag[i] += t * t;
        }
      }
      for (std::size_t i = 0; i < full; ++i) {
        acc.sum[i] = total[i] * total[i];
        if (!grouped) continue;
        for (std::size_t r = 0; r < ng; ++r) {
          for (std::size_t q = 0; q < ng; ++q) acc.gram[(i * ng + r) * ng + q] = g[i * ng + r] * g[i * ng + q];
        }
      }
      per[p] = std::move(acc);
    });

    const double np = static_cast<double>(xs.size());
    std::vector<double> probe_val(xs.size());
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t p = 0; p < xs.size(); ++p) {
        double fl = 0.0;
        if (grouped) {
          double u = 0.0, unused = 0.0;
          finish_grouped(&per[p].gram[i * ng * ng], u, unused);
          fl = per[p].sum[i] - u;
        } else if (reps >= 2) {
          // i.i.d.: unbiased per-probe floor (N sum t^2 - (sum t)^2) / (N - 1).
          fl = (rd * per[p].diag[i] - per[p].sum[i]) / (rd - 1.0);
        }
        probe_val[p] = per[p].sum[i] - fl;
        floor[i] += fl / np;
      }
      double mean = 0.0;
      for (double v : probe_val) mean += v;
      mean /= np;
      double ss = 0.0;
      for (double v : probe_val) ss += (v - mean) * (v - mean);
      value[i] = mean;
      se[i] = std::sqrt(ss / (np - 1.0) / np);
      if (grouped) {
        std::vector<double> avg(ng * ng, 0.0);
        for (const auto& acc : per) {
          for (std::size_t k = 0; k < ng * ng; ++k) avg[k] += acc.gram[i * ng * ng + k] / np;
        }
        double u = 0.0;
        finish_grouped(avg.data(), u, jack_se[i]);
      }
    }
  }

  SpectrumReport r;
  r.measure = mu.name;
  r.n = kernels.n();
  r.h_max = h_max;
  r.epsilon = eps;
  r.probes = probes;
  r.seed = seed;
  r.method = method == ScanMethod::gram ? "gram" : "probes";
  const double tv2 = mu.total_variation() * mu.total_variation();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& idx = kernels.kernels()[i].index;
    SpectrumEntry e;
    e.h = idx.h;
    e.m = idx.m;
    e.in_cone = in_cone(idx.h, idx.m, eps);
    e.norm_sq = value[i];
    const double dim = std::abs(kernels.diagonal(i));
    if (grouped) {
      e.mc_stderr = std::hypot(se[i], jack_se[i]);
    } else {
      // The i.i.d. floor is a sum of about dim squared noise coefficients.
      e.mc_stderr = std::sqrt(se[i] * se[i] + 2.0 * floor[i] * floor[i] / std::max(dim, 1.0));
    }
    // Rounding floor for exact (Gram) sums.
    const double eps_floor = 1e-12 * dim * tv2;
    e.flagged_nonzero = e.norm_sq > 4.0 * e.mc_stderr && e.norm_sq > eps_floor;
    r.entries.push_back(e);
  }
  return r;
}

MultiplierValue apply_multiplier(const DiscreteMeasure& mu, const KernelSet& kernels, double eps, int h_max,
                                 const SpherePoint& x) {
  ConeParams{eps}.validate();
  if (h_max < 0 || h_max > kernels.h_max()) throw std::invalid_argument("apply_multiplier: h_max exceeds kernel set");
  std::vector<double> proj(kernels.size());
  project_all(mu, kernels, x, proj);
  MultiplierValue out;
  double shell = 0.0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const auto& idx = kernels.kernels()[i].index;
    if (idx.h > h_max) break;
    const double weight = psi(idx.h, idx.m, eps);
    if (weight == 0.0) continue;
    if (!kernels.kernels()[i].usable()) {
      throw UnusableKernel("apply_multiplier: kernel " + KernelCache::key(idx) + " is unusable");
    }
    out.value += weight * proj[i];
    if (idx.h == h_max) shell += weight * proj[i];
  }
  out.tail = std::abs(shell);
  return out;
}

DiscreteMeasure multiplier_measure(const DiscreteMeasure& mu, const KernelSet& kernels, double eps, int h_max,
                                   std::size_t samples, std::uint64_t seed) {
  mu.validate();
  if (samples < 1) throw std::invalid_argument("multiplier_measure: need samples >= 1");
  unsigned log2 = 0;
  while ((std::size_t{1} << log2) * kMultiplierReplicates < samples) ++log2;
  const std::size_t per = std::size_t{1} << log2;
  const std::size_t total = per * kMultiplierReplicates;
  DiscreteMeasure out;
  out.name = "L3(" + mu.name + ")";
  out.replicates = kMultiplierReplicates;
  out.atoms.reserve(total);
  for (std::size_t r = 0; r < kMultiplierReplicates; ++r) {
    for (auto& y : sample_sphere_sobol(static_cast<std::size_t>(mu.n()), log2, derive_seed(seed, r))) {
      out.atoms.push_back({std::move(y), 0.0});
    }
  }
  parallel_chunks(chunk_count(total, kSampleChunk), [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * kSampleChunk);
    for (std::size_t a = c * kSampleChunk; a < end; ++a) {
      out.atoms[a].weight = apply_multiplier(mu, kernels, eps, h_max, out.atoms[a].point).value /
                            static_cast<double>(total);
    }
  });
  return out;
}

double cone_gap_check(double xi1_norm, double xi2_norm) {
  if (xi1_norm < 0.0 || xi2_norm < 0.0) throw std::invalid_argument("cone_gap_check: norms must be nonnegative");
  if (xi1_norm == 0.0 && xi2_norm == 0.0) throw std::invalid_argument("cone_gap_check: zero covector");
  const double r = std::hypot(xi1_norm, xi2_norm);
  return (r - xi2_norm) / (2.0 * r);
}

}  // namespace qsphere
