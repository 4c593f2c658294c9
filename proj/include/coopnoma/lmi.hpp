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

#include <limits>
#include <vector>

#include "coopnoma/types.hpp"

namespace coopnoma {

/// F(x) = F_0 + sum_i x_i F_{i+1}, every term Hermitian of the same size.
class AffineHermitianMap {
 public:
  AffineHermitianMap(Eigen::Index dim, int num_vars);

  Eigen::Index dim() const noexcept { return dim_; }
  int num_vars() const noexcept { return static_cast<int>(terms_.size()) - 1; }

  CMatrix& constant() { return terms_[0]; }
  const CMatrix& constant() const { return terms_[0]; }
  CMatrix& coefficient(int i) { return terms_[static_cast<std::size_t>(i) + 1]; }
  const CMatrix& coefficient(int i) const {
    return terms_[static_cast<std::size_t>(i) + 1];
  }

  CMatrix evaluate(const RVector& x) const;

 private:
  Eigen::Index dim_;
  std::vector<CMatrix> terms_;
};

/// minimize cost^T x + cost_offset
/// subject to F_j(x) <= 0 (negative semidefinite) for every block,
///            lower <= x <= upper (entries may be infinite).
///
/// The objective is linear; nonsmooth concave terms are brought in through
/// epigraph variables and 2x2 blocks by the caller.
struct LmiProgram {
  int num_vars = 0;
  RVector cost;
  double cost_offset = 0.0;
  std::vector<AffineHermitianMap> blocks;
  RVector lower;
  RVector upper;

  explicit LmiProgram(int n = 0);

  double objective(const RVector& x) const;
  /// Largest eigenvalue over all blocks at x (<= 0 means LMI-feasible).
  double max_block_eigenvalue(const RVector& x) const;
  bool strictly_feasible(const RVector& x) const;
  void validate() const;
};

struct LmiOptions {
  /// Target duality gap, relative: m / barrier_weight <= tol * (1 + |value|).
  double tol = 1e-10;
  /// Barrier weight multiplier between outer steps (mu <- 0.2 * mu).
  double weight_growth = 5.0;
  int max_outer = 80;
  int max_newton_per_outer = 200;
  int max_newton_total = 3000;
};

struct LmiResult {
  RVector x;
  double value = 0.0;
  /// Objective at each centered point, first to last.
  std::vector<double> outer_trace;
  int newton_steps = 0;
  double gap_bound = 0.0;
};

/// Log-determinant barrier method with damped Newton centering. If `start`
/// is not strictly feasible a phase-one problem is solved first.
///
/// Throws InfeasibleError when no strictly feasible point exists, and
/// NonConvergenceError (carrying the best iterate) when the Newton budget
/// runs out.
LmiResult solve_lmi(const LmiProgram& prog, const RVector& start,
                    const LmiOptions& options = {});

}  // namespace coopnoma
