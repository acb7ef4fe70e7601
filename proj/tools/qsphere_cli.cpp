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

// qsphere command-line driver: calibrate | verify | spectrum | multiplier | dimension | report

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qsphere/config.hpp"
#include "qsphere/dimension_lab.hpp"
#include "qsphere/measure_io.hpp"
#include "qsphere/parallel.hpp"
#include "qsphere/random.hpp"
#include "qsphere/spectral.hpp"
#include "qsphere/verify.hpp"
#include "qsphere/zonal_kernel.hpp"

namespace {

using namespace qsphere;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!out) throw UsageError("failed writing " + path);
}

// JSON to <out>.json (or stdout), CSV to <out>.csv (or stdout when no JSON goes there).
void emit(const RunConfig& cfg, const nlohmann::json& j, const std::string& csv, bool csv_to_stdout) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.output_path.empty()) {
    std::cout << (csv_to_stdout && !csv.empty() ? csv : text);
    return;
  }
  write_file(cfg.output_path + ".json", text);
  if (!csv.empty()) write_file(cfg.output_path + ".csv", csv);
}

DiscreteMeasure load_input(const std::string& spec, const RunConfig& cfg) {
  if (is_fixture_name(spec) && !std::filesystem::exists(spec)) {
    return make_fixture(spec, cfg.n, cfg.atoms, derive_seed(cfg.seed, 0x666978));
  }
  auto loaded = load_measure(spec);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  if (loaded.measure.n() != cfg.n) {
    throw UsageError("measure file has n=" + std::to_string(loaded.measure.n()) + " but --n is " +
                     std::to_string(cfg.n));
  }
  return std::move(loaded.measure);
}

KernelSet cached_kernels(const RunConfig& cfg) {
  const KernelCache cache = KernelCache::load(cfg.cache_path);
  KernelSet ks = KernelSet::from_cache(cache, cfg.n, cfg.h_max);
  for (const auto& idx : ks.unusable()) {
    std::cerr << "warning: kernel " << KernelCache::key(idx) << " failed calibration (spread >= "
              << kMaxCalibrationSpread << ")\n";
  }
  return ks;
}

int cmd_calibrate(const RunConfig& cfg) {
  KernelCache cache = KernelCache::load(cfg.cache_path);
  std::vector<SpherePoint> points;
  int bad = 0;
  nlohmann::json rows = nlohmann::json::array();
  std::cout << "n,h,m,c,spread,dim\n";
  for (const auto& idx : enumerate_indices(cfg.n, cfg.h_max)) {
    auto ck = cache.get(idx);
    if (!ck || ck->samples != cfg.mc_samples || ck->seed != cfg.seed || ck->probes != cfg.probes) {
      if (points.empty()) points = mc_sample(cfg.n, cfg.mc_samples, cfg.seed);
      ck = calibrate(idx, points, cfg.seed, cfg.probes);
      cache.put(*ck);
    }
    const double dim = ck->c * zonal_profile(idx, {1.0, 1.0});
    if (!ck->usable()) ++bad;
    std::cout << idx.n << ',' << idx.h << ',' << idx.m << ',' << ck->c << ',' << ck->spread << ',' << dim << '\n';
    rows.push_back({{"h", idx.h}, {"m", idx.m}, {"c", ck->c}, {"spread", ck->spread}, {"dim", dim}});
  }
  cache.save(cfg.cache_path);
  if (!cfg.output_path.empty()) write_file(cfg.output_path + ".json", nlohmann::json{{"kernels", rows}}.dump(2) + "\n");
  if (bad > 0) {
    std::cerr << bad << " kernel(s) exceeded the calibration spread limit\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  std::optional<KernelCache> cache;
  if (std::filesystem::exists(cfg.cache_path)) cache = KernelCache::load(cfg.cache_path);
  const auto summary = run_verify(cfg, cache ? &*cache : nullptr);
  const std::string text = summary.to_json().dump(2) + "\n";
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.output_path + ".json", text);
  }
  for (const auto& name : summary.failed()) std::cerr << "check failed: " << name << '\n';
  return summary.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& input) {
  const auto mu = load_input(input, cfg);
  const auto ks = cached_kernels(cfg);
  const auto rep = spectrum_scan(mu, ks, cfg.h_max, cfg.epsilon, cfg.scan_probes, cfg.seed);
  std::ostringstream csv;
  write_csv(csv, rep);
  emit(cfg, to_json(rep), csv.str(), true);
  return kExitOk;
}

int cmd_multiplier(const RunConfig& cfg, const std::string& input) {
  const auto mu = load_input(input, cfg);
  const auto ks = cached_kernels(cfg);
  const auto out = multiplier_measure(mu, ks, cfg.epsilon, cfg.h_max, cfg.mc_samples, derive_seed(cfg.seed, 0x4c33));
  const auto before = spectrum_scan(mu, ks, cfg.h_max, cfg.epsilon, cfg.scan_probes, cfg.seed, ScanMethod::probes);
  const auto after = spectrum_scan(out, ks, cfg.h_max, cfg.epsilon, cfg.scan_probes, cfg.seed, ScanMethod::probes);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < before.entries.size(); ++i) {
    const auto& b = before.entries[i];
    const auto& a = after.entries[i];
    rows.push_back({{"h", b.h},
                    {"m", b.m},
                    {"psi", psi(b.h, b.m, cfg.epsilon)},
                    {"in_cone", b.in_cone},
                    {"input_norm_sq", b.norm_sq},
                    {"output_norm_sq", a.norm_sq},
                    {"output_stderr", a.mc_stderr},
                    {"output_flagged_nonzero", a.flagged_nonzero}});
  }
  std::ostringstream csv;
  write_csv(csv, after);
  emit(cfg,
       {{"measure", mu.name},
        {"epsilon", cfg.epsilon},
        {"h_max", cfg.h_max},
        {"samples", cfg.mc_samples},
        {"indices", rows},
        {"output_last_shell_energy", after.last_shell_energy()}},
       csv.str(), false);
  return kExitOk;
}

int cmd_dimension(const RunConfig& cfg, const std::string& input) {
  const auto mu = load_input(input, cfg);
  const auto est = correlation_dimension(mu, cfg.seed);
  std::ostringstream csv;
  est.write_csv(csv);
  auto j = est.to_json();
  j["measure"] = mu.name;
  emit(cfg, j, csv.str(), false);
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, const std::string& input) {
  const auto mu = load_input(input, cfg);
  const auto ks = cached_kernels(cfg);
  const auto rep = theorem_consistency_report(mu, ks, cfg.epsilon, cfg.h_max, cfg.scan_probes, cfg.seed);
  emit(cfg, rep.to_json(), "", false);
  return rep.consistent ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis on quaternionic spheres S^{4n-1}"};
  app.set_config("--config", "", "Flat key=value file; keys are the long flag names");
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--n", cfg.n, "Quaternionic dimension n (sphere S^{4n-1})")->capture_default_str();
  app.add_option("--h-max", cfg.h_max, "Largest degree h")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "Cone half-width epsilon in (0, 1/2)")->capture_default_str();
  app.add_option("--mc-samples", cfg.mc_samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--probes", cfg.probes, "Calibration probe pairs")->capture_default_str();
  app.add_option("--scan-probes", cfg.scan_probes, "Probe points for spectrum scans")->capture_default_str();
  app.add_option("--atoms", cfg.atoms, "Atom count of generated fixtures")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--fd-step", cfg.fd_step, "Finite-difference step")->capture_default_str();
  app.add_option("--cache", cfg.cache_path, "Calibration cache (JSON)")->capture_default_str();
  app.add_option("--out", cfg.output_path, "Output path prefix (<out>.json, <out>.csv)");
  app.add_option("--threads", cfg.threads, "Worker thread cap (0 = runtime default)")->capture_default_str();

  std::string input;
  const char* measure_help = "Measure file or fixture name (uniform, point, subsphere:<k>, sp1-orbit)";
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate kernel constants into the cache");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite; exit 1 if any check fails");
  auto* spectrum = app.add_subcommand("spectrum", "Projection norms of a measure");
  auto* multiplier = app.add_subcommand("multiplier", "Apply the cone multiplier and rescan");
  auto* dimension = app.add_subcommand("dimension", "Correlation dimension estimate");
  auto* report = app.add_subcommand("report", "Dimension-bound consistency report");
  for (auto* sub : {calibrate, verify, spectrum, multiplier, dimension, report}) sub->fallthrough();
  for (auto* sub : {spectrum, multiplier, dimension, report}) sub->add_option("measure", input, measure_help)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.validate();
    set_thread_count(cfg.threads);
    if (calibrate->parsed()) return cmd_calibrate(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg, input);
    if (multiplier->parsed()) return cmd_multiplier(cfg, input);
    if (dimension->parsed()) return cmd_dimension(cfg, input);
    if (report->parsed()) return cmd_report(cfg, input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
