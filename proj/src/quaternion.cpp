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

#include "qsphere/quaternion.hpp"

#include <stdexcept>

namespace qsphere {

Quaternion exp_imag(const Quaternion& u) {
  if (std::abs(u.re) > 1e-12) {
    throw std::invalid_argument("exp_imag: argument must be pure imaginary");
  }
  const double theta = norm(u);
  if (theta == 0.0) {
    return Quaternion::one();
  }
  const double s = std::sin(theta) / theta;
  return {std::cos(theta), s * u.im_i, s * u.im_j, s * u.im_k};
}

}  // namespace qsphere
