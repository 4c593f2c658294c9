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

#include <string>
#include <vector>

#include "coopnoma/rates.hpp"

namespace coopnoma {

enum class Scheme { optimal, zf };

std::string to_string(Scheme scheme);

/// Dominant right singular vector of H_SR. Throws ValidationError on a zero
/// channel.
CVector init_receiver(const ChannelRealization& ch);

struct IterationRecord {
  double rate_r = 0.0;
  double rate_d = 0.0;
  double rho = 0.0;
  double sic_slack = 0.0;
  double d_slack = 0.0;
  double power_slack = 0.0;
  /// The transmit re-solve came out below the carried-over point and the
  /// carried-over point was kept.
  bool kept_previous = false;
};

enum class Termination { converged, max_iter, no_relay_power };

std::string to_string(Termination reason);

struct IterationTrace {
  std::vector<IterationRecord> records;
  Termination reason = Termination::max_iter;
};

struct AlternatingResult {
  TxSolution solution;
  IterationTrace trace;
};

inline constexpr int kAlternatingMaxIter = 15;
inline constexpr double kAlternatingTol = 1e-4;
/// Allowed decrease of R_R between iterations before it counts as a bug.
inline constexpr double kMonotoneTol = 1e-8;

/// Transmit design for the given scheme and fixed receive filter.
TxSolution transmit_design(const ChannelRealization& ch, const CVector& w_r,
                           const SystemParams& params, Scheme scheme);

/// Alternates the transmit design and the receive filter until R_R changes
/// by at most `tol` or `max_iter` transmit solves have run.
/// Throws InfeasibleError if the first transmit solve is infeasible and
/// NumericalError if R_R decreases by more than kMonotoneTol.
AlternatingResult alternate(const ChannelRealization& ch, const SystemParams& params,
                            Scheme scheme, int max_iter = kAlternatingMaxIter,
                            double tol = kAlternatingTol);

/// Rate of D when S serves it alone for the whole slot with MRT at power ps:
/// log2(1 + ps ||h_sd||^2 / sigma_d2).
double direct_transmission_rate(const ChannelRealization& ch,
                                const SystemParams& params);

}  // namespace coopnoma
