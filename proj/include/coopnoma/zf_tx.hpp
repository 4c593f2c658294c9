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

#include "coopnoma/optimal_tx.hpp"

namespace coopnoma {

/// w1 restricted to the null space of h_sd^H: w1 = V~ w~1.
struct ZfLifted {
  CMatrix v_tilde;      ///< M x (M-1), orthonormal columns, h_sd^H V~ = 0
  CMatrix h_tilde_p;    ///< V~^H h~ h~^H V~
  CMatrix h_bar_p;      ///< V~^H H_SR H_SR^H V~
  CVector h_sr_tilde_p; ///< V~^H h~

  static ZfLifted from(const EffectiveChannels& eff);
};

/// A~ = 2ps(1 - l1 g')H~' + 2ps eta ||h_rd||^2 l2 H-' - l3 I.
HermitianMatrix build_A_zf(const DualPoint& duals, const EffectiveChannels& eff,
                           const ZfLifted& zf, const SystemParams& params);
/// B~ = 2ps l1 H~ + 2ps l2 (H_sd + eta ||h_rd||^2 H-) - l3 I.
HermitianMatrix build_B_zf(const DualPoint& duals, const EffectiveChannels& eff,
                           const SystemParams& params);

/// Dual objective with the geometric-mean term evaluated exactly.
/// Uses lambda1 (SIC), lambda2 (QoS) and lambda3 (power) of `duals`.
double dual_objective_p42(const DualPoint& duals, double t,
                          const SystemParams& params);

/// Dual of the ZF subproblem for fixed t. In the result, lambda4 is unused,
/// c = lambda2 gamma' sigma_d2, and a = gamma' sigma_d2 / (2 ps) is the
/// level the combined relay and direct gain must reach.
DualSolveResult solve_dual_p42(double t, const EffectiveChannels& eff,
                               const ZfLifted& zf, const SystemParams& params,
                               const LmiOptions& options = {});

/// Beamformers from the null spaces of A~* and B~*; w1 = V~ tau1 u1.
RecoveredBeamformers recover_zf_beamformers(const DualSolveResult& dsr,
                                            const EffectiveChannels& eff,
                                            const ZfLifted& zf,
                                            const SystemParams& params);

/// ZF transmit design for a fixed receive filter.
/// Throws InfeasibleError if the target rate of D cannot be met.
TxSolution dinkelbach_zf(const ChannelRealization& ch, const CVector& w_r,
                         const SystemParams& params, double eps = kDinkelbachEps,
                         DinkelbachTrace* trace = nullptr);

}  // namespace coopnoma
