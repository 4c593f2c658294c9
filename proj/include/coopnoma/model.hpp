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

#include "coopnoma/types.hpp"

namespace coopnoma {

/// Scalar constants of the three-node system. All powers and variances are
/// linear (not dB). `ps` is the per-slot power of S, so phase one radiates 2*ps.
struct SystemParams {
  double ps = 1000.0;
  double sigma_d2 = 1.0;        ///< noise variance at D
  double sigma_r2 = 1.0;        ///< antenna noise variance at R
  double sigma_r2_tilde = 1.0;  ///< RF-to-baseband conversion noise at R
  double eta = 0.8;             ///< energy harvesting efficiency
  double rd_min = 0.0;          ///< target rate of D, bits/s/Hz
  int m = 2;                    ///< antennas at S
  int n = 4;                    ///< antennas at R

  /// Throws ValidationError on any violated invariant.
  void validate() const;
};

struct PathLossSpec {
  double pl_sr_db = 10.0;
  double pl_sd_db = 30.0;
  double pl_rd_db = 25.0;

  void validate() const;
};

/// Channels of one coherence block.
struct ChannelRealization {
  CMatrix h_sr;  ///< M x N, S -> R
  CVector h_sd;  ///< M, S -> D
  CVector h_rd;  ///< N, R -> D

  /// Dimension and finiteness checks against `params`.
  void validate(const SystemParams& params) const;
};

double db_to_linear(double db);

/// SINR threshold at D for rate `rd_min` under the two-phase 1/2 pre-log:
/// 2^(2 rd_min) - 1.
double gamma_threshold(const SystemParams& params);

/// i.i.d. circularly-symmetric complex Gaussian (Rayleigh) entries with
/// variance 10^(-PL/10) per link. Deterministic in `seed`.
ChannelRealization sample_channel(const SystemParams& params,
                                  const PathLossSpec& pl, std::uint64_t seed);

/// The fixed realization used for the single-channel rate region (M=2, N=4).
/// Only ||h_rd||^2 = 0.0723 matters; h_rd points along the all-ones direction.
ChannelRealization fig2_channel();

}  // namespace coopnoma
