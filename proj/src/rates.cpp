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

#include "coopnoma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace coopnoma {

TxSolution make_solution(const ChannelRealization& ch, CVector w1, CVector w2,
                         double rho, CVector w_r) {
  if (!(w_r.norm() > 0.0)) throw ValidationError("make_solution: zero receive filter");
  const double rd = ch.h_rd.norm();
  TxSolution sol;
  sol.w1 = std::move(w1);
  sol.w2 = std::move(w2);
  sol.rho = rho;
  sol.w_r = w_r.normalized();
  sol.w_d = rd > 0.0 ? CVector(ch.h_rd / rd) : CVector::Zero(ch.h_rd.size());
  return sol;
}

double sinr_d_phase1(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const double signal = two_ps * std::norm(ch.h_sd.dot(sol.w2));
  const double interference = two_ps * std::norm(ch.h_sd.dot(sol.w1));
  return signal / (interference + params.sigma_d2);
}

SicSinrs sinr_r_pair(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params) {
  const double wr2 = sol.w_r.squaredNorm();
  if (!(wr2 > 0.0)) throw ValidationError("sinr_r_pair: zero receive filter");
  // Effective scalars w_r^H H_SR^H w_i.
  const CVector g = ch.h_sr * sol.w_r;
  const double s1 = std::norm(g.dot(sol.w1));
  const double s2 = std::norm(g.dot(sol.w2));
  const double k = 2.0 * sol.rho * params.ps;
  const double noise = (sol.rho * params.sigma_r2 + params.sigma_r2_tilde) * wr2;
  SicSinrs out;
  out.gamma_d_to_r = k * s2 / (k * s1 + noise);
  out.gamma_r = k * s1 / noise;
  return out;
}

double relay_power(const ChannelRealization& ch, const TxSolution& sol,
                   const SystemParams& params) {
  const double e1 = (ch.h_sr.adjoint() * sol.w1).squaredNorm();
  const double e2 = (ch.h_sr.adjoint() * sol.w2).squaredNorm();
  return 2.0 * params.eta * params.ps * (1.0 - sol.rho) * (e1 + e2);
}

double sinr_d_phase2(const ChannelRealization& ch, const TxSolution& sol,
                     const SystemParams& params) {
  return relay_power(ch, sol, params) * ch.h_rd.squaredNorm() / params.sigma_d2;
}

double sinr_d_combined(const ChannelRealization& ch, const TxSolution& sol,
                       const SystemParams& params) {
  return sinr_d_phase1(ch, sol, params) + sinr_d_phase2(ch, sol, params);
}

double rate_r(const ChannelRealization& ch, const TxSolution& sol,
              const SystemParams& params) {
  return 0.5 * std::log2(1.0 + sinr_r_pair(ch, sol, params).gamma_r);
}

double rate_d(const ChannelRealization& ch, const TxSolution& sol,
              const SystemParams& params) {
  return 0.5 * std::log2(1.0 + sinr_d_combined(ch, sol, params));
}

ConstraintReport audit(const ChannelRealization& ch, const TxSolution& sol,
                       const SystemParams& params, double tol) {
  const double threshold = gamma_threshold(params);
  const double norm = std::max(1.0, threshold);
  ConstraintReport r;
  r.sic_sinr = sinr_r_pair(ch, sol, params).gamma_d_to_r;
  r.sic_slack = (r.sic_sinr - threshold) / norm;
  r.sic_ok = r.sic_slack >= -tol;
  r.d_combined_sinr = sinr_d_combined(ch, sol, params);
  r.d_slack = (r.d_combined_sinr - threshold) / norm;
  r.d_ok = r.d_slack >= -tol;
  r.power_used = sol.w1.squaredNorm() + sol.w2.squaredNorm();
  r.power_slack = 1.0 - r.power_used;
  r.power_ok = r.power_slack >= -tol;
  return r;
}

DirectionGains direction_gains(const ChannelRealization& ch, const CVector& w_r,
                               const CVector& u1, const CVector& u2) {
  const CVector g = ch.h_sr * w_r;
  DirectionGains out;
  out.s1 = std::norm(g.dot(u1));
  out.s2 = std::norm(g.dot(u2));
  out.d1 = std::norm(ch.h_sd.dot(u1));
  out.d2 = std::norm(ch.h_sd.dot(u2));
  out.e1 = (ch.h_sr.adjoint() * u1).squaredNorm();
  out.e2 = (ch.h_sr.adjoint() * u2).squaredNorm();
  out.rd2 = ch.h_rd.squaredNorm();
  return out;
}

std::optional<double> max_feasible_p1(const DirectionGains& g, double rho,
                                      const SystemParams& params, QosForm form) {
  const double gamma = gamma_threshold(params);
  if (gamma == 0.0) return 1.0;
  const double k = 2.0 * rho * params.ps;
  const double n0 = rho * params.sigma_r2 + params.sigma_r2_tilde;
  const double two_ps = 2.0 * params.ps;
  const double sd2 = params.sigma_d2;

  // SIC with p2 = 1 - p1 is linear in p1.
  const double sic_den = k * (g.s2 + gamma * g.s1);
  if (!(sic_den > 0.0)) return std::nullopt;
  const double hi = std::min(1.0, (k * g.s2 - gamma * n0) / sic_den);
  if (!(hi >= 0.0)) return std::nullopt;

  // QoS multiplied through by its positive denominator: q(p) >= 0.
  const double energy = 2.0 * params.eta * params.ps * (1.0 - rho) * g.rd2 / sd2;
  double qa = 0.0;
  double qb = 0.0;
  double qc = 0.0;
  if (form == QosForm::combined) {
    qa = energy * (g.e1 - g.e2) * two_ps * g.d1;
    qb = -two_ps * g.d2 + energy * (g.e1 - g.e2) * sd2 +
         (energy * g.e2 - gamma) * two_ps * g.d1;
    qc = two_ps * g.d2 + (energy * g.e2 - gamma) * sd2;
  } else {
    const double direct = two_ps * (1.0 - rho) * g.d2;
    qb = -direct + energy * (g.e1 - g.e2) * sd2;
    qc = direct + (energy * g.e2 - gamma) * sd2;
  }
  const auto q = [&](double p) { return (qa * p + qb) * p + qc; };
  if (q(hi) >= 0.0) return hi;

  // q(hi) < 0: the answer is the largest root of q in [0, hi].
  std::vector<double> roots;
  const double scale = std::abs(qb) + std::abs(qc);
  if (std::abs(qa) <= 1e-14 * scale) {
    if (qb != 0.0) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double w = -0.5 * (qb + (qb >= 0.0 ? root : -root));
      roots.push_back(w / qa);
      if (w != 0.0) roots.push_back(qc / w);
    }
  }
  double best = -1.0;
  for (double r : roots) {
    if (r >= 0.0 && r <= hi) best = std::max(best, r);
  }
  if (best < 0.0) return std::nullopt;
  // Step inside so the constraint holds in floating point.
  for (int i = 0; i < 60 && q(best) < 0.0 && best > 0.0; ++i) {
    best -= std::max(1e-15, 1e-12 * best) * std::exp2(i);
  }
  if (best < 0.0 || q(best) < 0.0) {
    if (q(0.0) >= 0.0) return 0.0;
    return std::nullopt;
  }
  return best;
}

}  // namespace coopnoma
