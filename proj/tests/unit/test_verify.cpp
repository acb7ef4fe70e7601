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

#include <doctest.h>

#include <algorithm>

#include "qsphere/verify.hpp"
#include "support.hpp"

using namespace qsphere;

namespace {

KernelCache exact_cache(int n, int h_max) {
  KernelCache cache;
  for (const auto& idx : enumerate_indices(n, h_max)) cache.put(qsphere::testing::exact_kernel(idx));
  return cache;
}

const CheckResult& find(const VerifySummary& s, const std::string& name) {
  const auto it = std::find_if(s.checks.begin(), s.checks.end(), [&](const auto& c) { return c.name == name; });
  REQUIRE(it != s.checks.end());
  return *it;
}

}  // namespace

TEST_CASE("verify passes on exact constants and catches a corrupted one") {
  RunConfig cfg;
  cfg.h_max = 6;
  cfg.mc_samples = 100000;
  KernelCache cache = exact_cache(2, 6);
  const auto good = run_verify(cfg, &cache);
  CHECK(good.passed());
  CHECK(good.failed().empty());
  CHECK(good.to_json().at("passed") == true);

  auto bad = qsphere::testing::exact_kernel(KernelIndex::make(2, 1, 2));
  bad.c *= 1.3;
  cache.put(bad);
  const auto broken = run_verify(cfg, &cache);
  CHECK(!broken.passed());
  CHECK(!find(broken, "orthogonality_idempotency").passed);
}

TEST_CASE("verify fails with a coarse finite-difference step") {
  RunConfig cfg;
  cfg.h_max = 6;
  cfg.mc_samples = 100000;
  cfg.fd_step = 0.5;
  const KernelCache cache = exact_cache(2, 6);
  const auto s = run_verify(cfg, &cache);
  CHECK(!find(s, "eigencheck").passed);
  CHECK(find(s, "orthogonality_idempotency").passed);
}
