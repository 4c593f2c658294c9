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

// Pieces shared by the optimal and ZF dual solvers.

#pragma once

#include <functional>

#include "coopnoma/linalg.hpp"
#include "coopnoma/lmi.hpp"
#include "coopnoma/optimal_tx.hpp"

namespace coopnoma::detail {

/// Lower bound standing in for a strict "> 0".
inline constexpr double kStrictFloor = 1e-10;
/// Multiplier caps, relative to each multiplier's natural scale. A capped
/// multiplier at the optimum means the primal has no feasible point.
inline constexpr double kCapFactor = 1e6;
/// Relative eigenvalue level treated as zero in the rank tests.
inline constexpr double kRankTol = 1e-6;

/// -[[b, s], [s, c]] <= 0 with b = b0 + b1 x[ib], c = c1 x[ic]: s <= sqrt(bc).
inline AffineHermitianMap geometric_mean_block(int num_vars, int ib, int ic, int is,
                                               double b0, double b1, double c1) {
  AffineHermitianMap block(2, num_vars);
  block.constant()(0, 0) = -b0;
  block.coefficient(ib)(0, 0) = -b1;
  block.coefficient(ic)(1, 1) = -c1;
  block.coefficient(is)(0, 1) = -1.0;
  block.coefficient(is)(1, 0) = -1.0;
  return block;
}

inline bool near_cap(const RVector& x, const RVector& upper, int count) {
  for (int i = 0; i < count; ++i) {
    if (x(i) > 0.5 * upper(i)) return true;
  }
  return false;
}

struct NullDirection {
  CVector vector;
  bool empty = false;       ///< strictly negative definite
  bool degenerate = false;  ///< null space wider than one dimension
};

/// Eigenvector of the largest eigenvalue of a (negative semidefinite) matrix,
/// with the rank-one test of null_space_unit_vector.
inline NullDirection null_direction(const HermitianMatrix& a, double ref) {
  NullDirection out;
  const auto eig = hermitian_eigen(a);
  const auto top = eig.values.size() - 1;
  out.vector = eig.vectors.col(top).normalized();
  fix_phase(out.vector);
  if (eig.values(top) < -kRankTol * ref) {
    out.empty = true;
    return out;
  }
  try {
    out.vector = null_space_unit_vector(a, kRankTol, ref);
  } catch (const DegeneracyError&) {
    out.degenerate = true;
  }
  return out;
}

TxSolution finish_design(const ChannelRealization& ch, const CVector& w_r,
                         const RecoveredBeamformers& rec, double rho,
                         const SystemParams& params, QosForm form);

/// Outcome of one inner solve of the Dinkelbach loop at parameter t.
struct InnerSolve {
  double f = 0.0;  ///< optimal value of the subtractive problem
  double gamma_split = 0.0;
  double rho = 0.0;
  RecoveredBeamformers beams;
};

/// Dinkelbach iteration from t = eps: stops when |F(t)| <= eps, when the
/// optimum puts no power on R, or when t stops increasing.
TxSolution run_dinkelbach(const ChannelRealization& ch, const CVector& w_r,
                          const EffectiveChannels& eff, const SystemParams& params,
                          double eps, QosForm form, DinkelbachTrace* trace,
                          const std::function<InnerSolve(double)>& inner);

TxSolution direct_only_design(const ChannelRealization& ch, const CVector& w_r,
                              const CVector& direction);

}  // namespace coopnoma::detail
