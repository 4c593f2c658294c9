// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "coopnoma/types.hpp"

namespace testutil {

inline coopnoma::CVector random_cvector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  coopnoma::CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline coopnoma::CMatrix random_cmatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g(0.0, 1.0);
  coopnoma::CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline coopnoma::CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index k) {
  const coopnoma::CMatrix m = random_cmatrix(rng, k, k);
  return (m + m.adjoint()) / 2.0;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testutil
