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

// Brute-force verifiers. Slow by design; meant for tests and `verify`.

#pragma once

#include <vector>

#include "coopnoma/rates.hpp"
#include "coopnoma/rx_filter.hpp"

namespace coopnoma {

struct OracleResult {
  bool feasible = false;
  double best_sinr_r = 0.0;  ///< best SINR of R (the rate argument)
  double best_rate_r = 0.0;
  TxSolution point;
  /// Best value after each refinement level, coarse to fine.
  std::vector<double> level_best;
};

struct OracleOptions {
  int resolution = 20;  ///< grid points per dimension and level
  int levels = 3;
};

/// Grid search over w_i = sqrt(p_i)(cos th_i, sin th_i e^{j ph_i}) and rho
/// for the transmit problem at fixed w_r (M = 2 only). For each direction
/// pair and rho the largest feasible p1 is found exactly with p2 = 1 - p1.
/// Each level re-grids a box of one previous step around the incumbent.
OracleResult brute_force_p2(const ChannelRealization& ch, const CVector& w_r,
                            const SystemParams& params,
                            const OracleOptions& options = {});

/// The same search with w1 fixed to the null direction of h_sd^H and the
/// relaxed QoS form of the ZF design.
OracleResult brute_force_zf(const ChannelRealization& ch, const CVector& w_r,
                            const SystemParams& params,
                            const OracleOptions& options = {});

/// Minimizer of b/rho + c/(1 - rho) by a `points` grid followed by
/// golden-section refinement.
double grid_min_rho(double b, double c, int points = 1000);

struct GridFilterResult {
  bool feasible = false;
  double value = 0.0;  ///< max |h1^H w(lambda)|^2 over feasible grid points
  double lambda = 0.0;
};

/// Dense lambda grid for the receive-filter problem, polished within the
/// cells around the best grid point by bisection on the constraint and
/// golden section on the objective.
GridFilterResult grid_filter(const FilterGeometry& geom, double rho,
                             const SystemParams& params, int points = 1000000);

}  // namespace coopnoma
