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

namespace qsphere {

/// Classical Jacobi polynomial P_degree^{(alpha, beta)} on [-1, 1].
struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
  int degree = 0;
};

/// Argument overshoot tolerated beyond [-1, 1] (rounding in inner products).
inline constexpr double kDomainSlack = 1e-12;

/// Three-term recurrence evaluation. Throws std::invalid_argument for
/// alpha <= -1, beta <= -1, degree < 0, and std::domain_error for |x| > 1 + slack.
double jacobi_eval(const JacobiParams& params, double x);

/// W_k(a, s) = |q|^k U_k(a / |q|) for a = Re q, s = |q|^2, computed as
/// W_0 = 1, W_1 = 2a, W_k = 2a W_{k-1} - s W_{k-2}. A polynomial in (a, s), so
/// it stays finite at q = 0. Throws std::domain_error when a^2 > s beyond slack.
double cheb_u_scaled(int k, double a, double s);

/// Exact binomial coefficient C(a, b). Throws std::out_of_range unless
/// 0 <= b <= a, std::overflow_error if the result does not fit in int64.
std::int64_t binomial(int a, int b);

}  // namespace qsphere
