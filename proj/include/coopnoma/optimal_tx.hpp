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

#include <optional>
#include <vector>

#include "coopnoma/linalg.hpp"
#include "coopnoma/lmi.hpp"
#include "coopnoma/rates.hpp"

namespace coopnoma {

/// Channel quantities seen by the transmit design once w_r is fixed.
struct EffectiveChannels {
  CVector h_sr_tilde;  ///< H_SR w_r
  CMatrix h_tilde;     ///< h_sr_tilde h_sr_tilde^H
  CMatrix h_bar;       ///< H_SR H_SR^H
  CMatrix h_sd_outer;  ///< h_sd h_sd^H
  CVector h_sd;
  double h_rd_norm2 = 0.0;

  static EffectiveChannels from(const ChannelRealization& ch, const CVector& w_r);
};

/// Multipliers of the SIC, direct-link, harvested-energy and power constraints.
struct DualPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
};

struct DualSolveResult {
  DualPoint duals;
  double d_star = 0.0;  ///< dual optimal value (= primal value at zero gap)
  double a = 0.0;       ///< required harvested-energy level
  double b = 0.0;       ///< (t + lambda1 gamma') sigma_r2_tilde
  double c = 0.0;       ///< coefficient of 1/(1 - rho)
  double rho_star = 0.0;
  double t = 0.0;
  double gamma_split = 0.0;
  /// A multiplier reached its safeguard cap: the primal is infeasible at
  /// this (t, gamma_split) and d_star is not meaningful.
  bool unbounded = false;
  std::vector<double> trace;  ///< barrier objective per outer step
  int newton_steps = 0;
};

struct RecoveredBeamformers {
  CVector u1;
  CVector u2;
  double tau1 = 0.0;
  double tau2 = 0.0;
  CVector w1;
  CVector w2;
  /// The optimum puts no power on w1 (A* is strictly negative definite).
  bool w1_zero = false;
  /// A null space failed the rank-one test; the top eigenvector was used.
  bool degenerate = false;
};

struct RhoStar {
  double rho = 0.0;
  double value = 0.0;
};

/// Minimizer of b/rho + c/(1 - rho) over (0, 1). Throws DomainError unless
/// b > 0 and c > 0.
RhoStar rho_star(double b, double c);

/// A(lambda) = 2ps(1 - l1 g')H~ + l3 H- - 2ps l2 G H_sd - l4 I.
HermitianMatrix build_A(const DualPoint& duals, double gamma_split,
                        const EffectiveChannels& eff, const SystemParams& params);
/// B(lambda) = 2ps l1 H~ + l3 H- + 2ps l2 H_sd - l4 I.
HermitianMatrix build_B(const DualPoint& duals, const EffectiveChannels& eff,
                        const SystemParams& params);

/// Required harvested-energy level a for a direct-link share `gamma_split`.
double energy_requirement(double gamma_split, const EffectiveChannels& eff,
                          const SystemParams& params);

/// Dual objective at `duals`, with the geometric-mean term evaluated exactly.
double dual_objective_p25(const DualPoint& duals, double t, double gamma_split,
                          const EffectiveChannels& eff, const SystemParams& params);

/// Solves the dual of the relaxed transmit problem for fixed (t, gamma_split).
/// Requires t > 0 and gamma' > gamma_split.
DualSolveResult solve_dual_p25(double t, double gamma_split,
                               const EffectiveChannels& eff,
                               const SystemParams& params,
                               const LmiOptions& options = {});

/// Rank-one beamformers from the null spaces of A* and B*.
RecoveredBeamformers recover_beamformers(const DualSolveResult& dsr,
                                         const EffectiveChannels& eff,
                                         const SystemParams& params);

/// Derivative of the optimal value with respect to the direct-link share.
double gamma_gradient(const DualSolveResult& dsr, const RecoveredBeamformers& rec,
                      const EffectiveChannels& eff, const SystemParams& params);

struct GammaSearchResult {
  double gamma = 0.0;
  DualSolveResult dual;
  RecoveredBeamformers beams;
  /// The search never moved one bracket end: optimum sits on the boundary.
  bool boundary = false;
  int iterations = 0;
};

/// Bisection on the sign of gamma_gradient over [0, gamma'(1 - 1e-6)] down to
/// bracket width `delta`. Returns the best feasible point evaluated.
/// Throws InfeasibleError if no evaluated split admits a feasible point.
GammaSearchResult bisect_gamma(double t, const EffectiveChannels& eff,
                               const SystemParams& params, double delta);

struct DinkelbachTrace {
  std::vector<double> t;  ///< parameter at each iteration
  std::vector<double> f;  ///< F(t) at each iteration
  std::vector<double> gamma;
};

inline constexpr double kDinkelbachEps = 1e-6;
inline constexpr int kDinkelbachMaxIter = 50;

/// Optimal transmit design for a fixed receive filter.
/// Throws InfeasibleError if the target rate of D cannot be met.
TxSolution dinkelbach_optimal(const ChannelRealization& ch, const CVector& w_r,
                              const SystemParams& params,
                              double eps = kDinkelbachEps,
                              DinkelbachTrace* trace = nullptr);

/// Re-solves the power split along the recovered directions (u1, u2) at the
/// recovered rho: the largest feasible share on u1 with the rest on u2.
/// Returns nullopt if the directions admit no feasible split.
std::optional<TxSolution> allocate_along(const ChannelRealization& ch,
                                         const CVector& w_r, const CVector& u1,
                                         const CVector& u2, double rho,
                                         const SystemParams& params, QosForm form);

/// 2ps |h~^H w1|^2, the numerator of the rate argument of R.
double dinkelbach_numerator(const TxSolution& sol, const EffectiveChannels& eff,
                            const SystemParams& params);
/// sigma_r2 + sigma_r2_tilde / rho.
double dinkelbach_denominator(double rho, const SystemParams& params);

}  // namespace coopnoma
