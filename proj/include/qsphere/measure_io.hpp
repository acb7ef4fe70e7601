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

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsphere/spectral.hpp"

namespace qsphere {

/// Malformed measure file; what() names the source and line number.
class MeasureParseError : public std::runtime_error {
 public:
  MeasureParseError(const std::string& source, std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadedMeasure {
  DiscreteMeasure measure;
  std::vector<std::string> warnings;
};

/// Text format: a "# n=<n>" header, then one atom per line with 4n + 1
/// comma-separated reals (ambient coordinates, then the weight). Other lines
/// starting with '#' are comments, except "# sampled=true|false" (atoms are
/// i.i.d. draws) and "# replicates=<R>" (see DiscreteMeasure). Points are
/// renormalized; deviations above 1e-6 produce a warning.
LoadedMeasure parse_measure(std::istream& in, const std::string& source = "<stream>");
LoadedMeasure load_measure(const std::string& path);
void write_measure(std::ostream& out, const DiscreteMeasure& mu);

/// uniform | point | subsphere:<k> | sp1-orbit
bool is_fixture_name(const std::string& name);
/// Builds a named fixture; `atoms` is ignored for "point".
DiscreteMeasure make_fixture(const std::string& name, int n, std::size_t atoms, std::uint64_t seed);

}  // namespace qsphere
