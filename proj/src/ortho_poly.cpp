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

#include "qsphere/ortho_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsphere {

double jacobi_eval(const JacobiParams& p, double x) {
  if (!(p.alpha > -1.0) || !(p.beta > -1.0) || p.degree < 0) {
    throw std::invalid_argument("jacobi_eval: need alpha > -1, beta > -1, degree >= 0");
  }
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    throw std::domain_error("jacobi_eval: argument outside [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  const double a = p.alpha;
  const double b = p.beta;
  double prev = 1.0;
  if (p.degree == 0) return prev;
  double cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (int k = 2; k <= p.degree; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double cheb_u_scaled(int k, double a, double s) {
  if (k < 0) throw std::invalid_argument("cheb_u_scaled: negative degree");
  if (s < 0.0 || a * a > s + kDomainSlack * (1.0 + s)) {
    throw std::domain_error("cheb_u_scaled: need s >= 0 and a^2 <= s");
  }
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 2.0 * a;
  for (int j = 2; j <= k; ++j) {
    const double next = 2.0 * a * cur - s * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::int64_t binomial(int a, int b) {
  if (b < 0 || a < 0 || b > a) throw std::out_of_range("binomial: need 0 <= b <= a");
  b = std::min(b, a - b);
  std::int64_t c = 1;
  for (int i = 1; i <= b; ++i) {
    // c * (a - b + i) / i is exact at every step; the gcd split keeps the
    // intermediate product as small as possible before the overflow check.
    std::int64_t num = a - b + i;
    std::int64_t den = i;
    const std::int64_t g = std::gcd(c, den);
    c /= g;
    den /= g;
    num /= den;  // den now divides num because the final quotient is integral
    std::int64_t next = 0;
    if (__builtin_mul_overflow(c, num, &next)) throw std::overflow_error("binomial: overflow");
    c = next;
  }
  return c;
}

}  // namespace qsphere
