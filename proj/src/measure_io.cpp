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

#include "qsphere/measure_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string_view>

#include "qsphere/dimension_lab.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

MeasureParseError::MeasureParseError(const std::string& source, std::size_t line, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

LoadedMeasure parse_measure(std::istream& in, const std::string& source) {
  LoadedMeasure out;
  out.measure.name = source;
  int n = 0;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  bool iid = false;
  std::size_t replicates = 0;
  std::size_t replicates_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const std::string_view meta = trim(body.substr(1));
      if (meta.starts_with("n=")) {
        if (n != 0) throw MeasureParseError(source, lineno, "duplicate n= header");
        const std::string_view v = trim(meta.substr(2));
        const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || n < 2) {
          throw MeasureParseError(source, lineno, "header must read '# n=<n>' with n >= 2");
        }
      } else if (meta == "sampled=true") {
        iid = true;
      } else if (meta == "sampled=false") {
        iid = false;
      } else if (meta.starts_with("replicates=")) {
        const std::string_view v = trim(meta.substr(11));
        const auto res = std::from_chars(v.data(), v.data() + v.size(), replicates);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || replicates < 2) {
          throw MeasureParseError(source, lineno, "header must read '# replicates=<R>' with R >= 2");
        }
        replicates_line = lineno;
      }
      continue;
    }
    if (n == 0) throw MeasureParseError(source, lineno, "missing '# n=<n>' header before data");
    values.clear();
    std::string_view rest = body;
    while (true) {
      const auto comma = rest.find(',');
      double v = 0.0;
      if (!parse_double(rest.substr(0, comma), v)) {
        throw MeasureParseError(source, lineno, "expected a finite real number");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::size_t want = 4 * static_cast<std::size_t>(n) + 1;
    if (values.size() != want) {
      throw MeasureParseError(source, lineno,
                              "expected " + std::to_string(want) + " values, got " + std::to_string(values.size()));
    }
    HVector v = HVector::from_ambient(std::span<const double>(values.data(), want - 1));
    const double r = norm(v);
    if (!(r > 0.0)) throw MeasureParseError(source, lineno, "zero point");
    if (std::abs(r - 1.0) > 1e-6) {
      out.warnings.push_back(source + ":" + std::to_string(lineno) + ": point renormalized (norm " +
                             std::to_string(r) + ")");
    }
    out.measure.atoms.push_back({SpherePoint(std::move(v)), values.back()});
  }
  if (n == 0) throw MeasureParseError(source, lineno, "missing '# n=<n>' header");
  if (out.measure.atoms.empty()) throw MeasureParseError(source, lineno, "no atoms");
  const std::size_t count = out.measure.atoms.size();
  if (replicates != 0) {
    if (count % replicates != 0) {
      throw MeasureParseError(source, replicates_line, "replicate count does not divide the atom count");
    }
    out.measure.replicates = replicates;
  } else if (iid && count >= 2) {
    out.measure.replicates = count;
  }
  return out;
}

LoadedMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measure file " + path);
  return parse_measure(in, path);
}

void write_measure(std::ostream& out, const DiscreteMeasure& mu) {
  out << "# n=" << mu.n() << '\n';
  if (mu.sampled() && mu.replicates == mu.atoms.size()) {
    out << "# sampled=true\n";
  } else if (mu.sampled()) {
    out << "# replicates=" << mu.replicates << '\n';
  }
  out << std::setprecision(17);
  for (const auto& a : mu.atoms) {
    for (const auto& q : a.point.vec().coords()) out << q.re << ',' << q.im_i << ',' << q.im_j << ',' << q.im_k << ',';
    out << a.weight << '\n';
  }
}

bool is_fixture_name(const std::string& name) {
  if (name == "uniform" || name == "point" || name == "sp1-orbit") return true;
  if (!name.starts_with("subsphere:")) return false;
  int k = 0;
  const std::string_view v = std::string_view(name).substr(10);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), k);
  return res.ec == std::errc() && res.ptr == v.data() + v.size() && k >= 1;
}

DiscreteMeasure make_fixture(const std::string& name, int n, std::size_t atoms, std::uint64_t seed) {
  if (!is_fixture_name(name)) throw std::invalid_argument("unknown fixture '" + name + "'");
  const auto base = SpherePoint(HVector::basis(static_cast<std::size_t>(n), 0));
  if (name == "point") return gen_point_mass(base);
  if (name == "uniform") return gen_uniform(n, atoms, seed);
  if (name == "sp1-orbit") {
    Engine eng = make_stream(derive_seed(seed, 0x6f72), 0);
    return gen_sp1_orbit(random_point(static_cast<std::size_t>(n), eng), atoms, seed);
  }
  return gen_subsphere(n, std::stoi(name.substr(10)), atoms, seed);
}

}  // namespace qsphere
