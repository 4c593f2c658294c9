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

#include "coopnoma/rates.hpp"

namespace coopnoma {

/// The receive-filter problem in the plane spanned by h1 and h2.
///
/// w(lambda) = sqrt(lambda) e_par + sqrt(1 - lambda) e_perp, where e_par is
/// the unit direction of the projection of h1 onto h2 and e_perp that of the
/// orthogonal remainder.
struct FilterGeometry {
  CVector h1;  ///< H_SR^H w1
  CVector h2;  ///< H_SR^H w2
  double alpha = 0.0;  ///< ||P_h2 h1||
  double beta = 0.0;   ///< ||P_h2^perp h1||
  CVector e_par;
  CVector e_perp;  ///< zero when beta = 0

  static FilterGeometry from_vectors(CVector h1, CVector h2);
  static FilterGeometry from(const ChannelRealization& ch, const CVector& w1,
                             const CVector& w2);
};

/// |h1^H w(lambda)|^2 = (sqrt(lambda) alpha + sqrt(1 - lambda) beta)^2.
double filter_objective(const FilterGeometry& geom, double lambda);

/// 2 rho ps |h2^H w|^2 - gamma' (2 rho ps |h1^H w|^2 + rho sigma_r2 +
/// sigma_r2_tilde) at w(lambda); >= 0 means the SIC constraint holds.
double filter_sic_margin(const FilterGeometry& geom, double lambda, double rho,
                         const SystemParams& params);

/// Unit-norm w(lambda).
CVector filter_from_lambda(const FilterGeometry& geom, double lambda);

/// True iff some lambda in [0, 1] meets the SIC constraint, i.e. the margin
/// at lambda = 1 is nonnegative.
bool filter_feasible(const FilterGeometry& geom, double rho,
                     const SystemParams& params);

struct ReceiveFilter {
  CVector w_r;
  double lambda = 0.0;
  /// The SIC constraint binds. When false the matched filter h1/||h1|| is
  /// feasible and optimal.
  bool active = false;
};

/// Maximizes |h1^H w|^2 over unit w subject to the SIC constraint at R.
/// Throws InfeasibleError when no unit w meets it, ValidationError when
/// h1 = 0, NumericalError when the root search disagrees with the
/// feasibility test.
ReceiveFilter optimal_receive_filter(const FilterGeometry& geom, double rho,
                                     const SystemParams& params);

}  // namespace coopnoma
