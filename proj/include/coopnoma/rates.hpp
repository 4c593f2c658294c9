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

#include "coopnoma/model.hpp"

namespace coopnoma {

/// A complete transceiver configuration.
///
/// `w_d` is always h_rd / ||h_rd|| (maximal ratio transmission at R) and is
/// filled in by make_solution; it is never a free design variable.
struct TxSolution {
  CVector w1;  ///< beamformer carrying R's message
  CVector w2;  ///< beamformer carrying D's message
  double rho = 0.5;
  CVector w_r;  ///< receive filter at R, unit norm
  CVector w_d;  ///< relay transmit beamformer
};

/// Assembles a TxSolution, normalizing w_r and deriving w_d from the channel.
TxSolution make_solution(const ChannelRealization& ch, CVector w1, CVector w2,
                         double rho, CVector w_r);

struct SicSinrs {
  double gamma_d_to_r = 0.0;  ///< SINR at R when decoding D's symbol first
  double gamma_r = 0.0;       ///< SINR at R for its own symbol after SIC
};

/// Phase-one SINR of D's symbol at D.
double sinr_d_phase1(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params);
SicSinrs sinr_r_pair(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params);
/// Harvested power spent by R in phase two.
double relay_power(const ChannelRealization& ch, const TxSolution& sol,
                   const SystemParams& params);
double sinr_d_phase2(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params);
/// Combined SINR at D after MRC of both phases.
double sinr_d_combined(const ChannelRealization& ch, const TxSolution& sol,
                       const SystemParams& params);
double rate_r(const ChannelRealization& ch, const TxSolution& sol,
              const SystemParams& params);
double rate_d(const ChannelRealization& ch, const TxSolution& sol,
              const SystemParams& params);

/// Constraint audit. Slacks are normalized: (lhs - rhs) / max(1, rhs) for the
/// two SINR constraints and 1 - power for the power budget. A flag is true
/// iff its slack >= -tol.
struct ConstraintReport {
  double sic_sinr = 0.0;
  double sic_slack = 0.0;
  bool sic_ok = false;
  double d_combined_sinr = 0.0;
  double d_slack = 0.0;
  bool d_ok = false;
  double power_used = 0.0;
  double power_slack = 0.0;
  bool power_ok = false;

  bool all_ok() const noexcept { return sic_ok && d_ok && power_ok; }
};

inline constexpr double kAuditTol = 1e-6;

ConstraintReport audit(const ChannelRealization& ch, const TxSolution& sol,
                       const SystemParams& params, double tol = kAuditTol);

/// Gains of two fixed unit directions u1 (R's message) and u2 (D's message).
struct DirectionGains {
  double s1 = 0.0;  ///< |(H_SR w_r)^H u1|^2
  double s2 = 0.0;
  double d1 = 0.0;  ///< |h_sd^H u1|^2
  double d2 = 0.0;
  double e1 = 0.0;  ///< ||H_SR^H u1||^2
  double e2 = 0.0;
  double rd2 = 0.0;  ///< ||h_rd||^2
};

DirectionGains direction_gains(const ChannelRealization& ch, const CVector& w_r,
                               const CVector& u1, const CVector& u2);

/// Which form of D's QoS constraint to enforce.
enum class QosForm {
  combined,    ///< phase-one SINR + phase-two SNR
  zf_relaxed,  ///< phase-one term scaled by (1 - rho), w1 interference-free
};

/// Largest p1 in [0, 1] such that w1 = sqrt(p1) u1, w2 = sqrt(1 - p1) u2 at
/// split `rho` meets the SIC and QoS constraints. Every constraint is
/// monotone in the power on u2, so a full power budget loses nothing.
/// Returns nullopt when no p1 works.
std::optional<double> max_feasible_p1(const DirectionGains& g, double rho,
                                      const SystemParams& params, QosForm form);

}  // namespace coopnoma
