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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsphere/ortho_poly.hpp"

using namespace qsphere;

namespace {

// P_n^{(a,b)}(x) = (a+1)_n / n! * 2F1(-n, n+a+b+1; a+1; (1-x)/2), summed directly.
// `magnitude` receives the sum of |terms|, which bounds the cancellation error.
double jacobi_series(int deg, long double a, long double b, long double x, double& magnitude) {
  long double poch = 1.0L;
  for (int i = 1; i <= deg; ++i) poch *= (a + i) / i;
  const long double z = (1.0L - x) / 2.0L;
  long double term = 1.0L, sum = 1.0L, mag = 1.0L;
  for (int k = 0; k < deg; ++k) {
    term *= (-deg + k) * (deg + a + b + 1.0L + k) / ((a + 1.0L + k) * (k + 1.0L)) * z;
    sum += term;
    mag += std::abs(term);
  }
  magnitude = static_cast<double>(poch * mag);
  return static_cast<double>(poch * sum);
}

}  // namespace

TEST_CASE("Jacobi recurrence agrees with the hypergeometric series") {
  for (double a : {0.0, 1.0, 3.0, 5.0}) {
    for (double b : {0.0, 1.0, 2.5, 9.0}) {
      for (int deg = 0; deg <= 12; ++deg) {
        for (double x : {-1.0, -0.7, -0.1, 0.0, 0.33, 0.9, 1.0}) {
          double mag = 0.0;
          const double ref = jacobi_series(deg, a, b, x, mag);
          CHECK(std::abs(jacobi_eval({a, b, deg}, x) - ref) <= 1e-13 * (1.0 + std::abs(ref)) + 1e-15 * mag);
        }
      }
    }
  }
}

TEST_CASE("Jacobi special values") {
  CHECK(jacobi_eval({0, 0, 2}, 0.5) == doctest::Approx(-0.125));  // Legendre (3x^2-1)/2
  CHECK(jacobi_eval({1, 2, 0}, 0.3) == 1.0);
  CHECK(jacobi_eval({1, 2, 1}, 0.3) == doctest::Approx(0.5 * ((1 - 2) + (1 + 2 + 2) * 0.3)));
  // P_n^{(a,b)}(1) = binom(n + a, n)
  CHECK(jacobi_eval({3, 2, 4}, 1.0) == doctest::Approx(35.0));
  // Symmetry P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)
  CHECK(jacobi_eval({1, 4, 5}, -0.4) == doctest::Approx(-jacobi_eval({4, 1, 5}, 0.4)));
}

TEST_CASE("Jacobi domain and parameter errors") {
  CHECK_THROWS_AS(jacobi_eval({1, 1, 3}, 1.5), std::domain_error);
  CHECK_THROWS_AS(jacobi_eval({1, 1, 3}, -1.0 - 1e-9), std::domain_error);
  CHECK_NOTHROW(jacobi_eval({1, 1, 3}, 1.0 + 1e-13));
  CHECK_THROWS_AS(jacobi_eval({1, 1, -1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_eval({-1.5, 1, 2}, 0.0), std::invalid_argument);
}

TEST_CASE("scaled Chebyshev U") {
  CHECK(cheb_u_scaled(0, 0.3, 0.5) == 1.0);
  CHECK(cheb_u_scaled(1, 0.3, 0.5) == doctest::Approx(0.6));
  CHECK(cheb_u_scaled(2, 0.3, 0.5) == doctest::Approx(4 * 0.09 - 0.5));
  // s = 1: W_k(cos t, 1) = sin((k+1) t) / sin t
  for (int k = 0; k <= 15; ++k) {
    for (double t : {0.2, 1.0, 2.5}) {
      CHECK(cheb_u_scaled(k, std::cos(t), 1.0) == doctest::Approx(std::sin((k + 1) * t) / std::sin(t)));
    }
  }
  // Homogeneity W_k(l a, l^2 s) = l^k W_k(a, s)
  for (int k = 0; k <= 10; ++k) {
    const double l = 0.7;
    CHECK(cheb_u_scaled(k, l * 0.4, l * l * 0.6) ==
          doctest::Approx(std::pow(l, k) * cheb_u_scaled(k, 0.4, 0.6)).epsilon(1e-12));
  }
  // Recurrence residual
  for (int k = 2; k <= 20; ++k) {
    const double a = -0.35, s = 0.8;
    const double r = cheb_u_scaled(k, a, s) - (2 * a * cheb_u_scaled(k - 1, a, s) - s * cheb_u_scaled(k - 2, a, s));
    CHECK(std::abs(r) < 1e-12);
  }
  CHECK_THROWS_AS(cheb_u_scaled(2, 0.9, 0.5), std::domain_error);
  CHECK_THROWS_AS(cheb_u_scaled(-1, 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(7, 0) == 1);
  CHECK(binomial(7, 7) == 1);
  CHECK_THROWS_AS(binomial(3, 5), std::out_of_range);
  CHECK(binomial(60, 30) == 118264581564861424LL);
  CHECK_THROWS_AS(binomial(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}
