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

#include "coopnoma/zf_tx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dual_common.hpp"

namespace coopnoma {

ZfLifted ZfLifted::from(const EffectiveChannels& eff) {
  ZfLifted zf;
  zf.v_tilde = null_space_of_row(eff.h_sd);
  zf.h_sr_tilde_p = zf.v_tilde.adjoint() * eff.h_sr_tilde;
  zf.h_tilde_p = zf.h_sr_tilde_p * zf.h_sr_tilde_p.adjoint();
  zf.h_bar_p = zf.v_tilde.adjoint() * eff.h_bar * zf.v_tilde;
  return zf;
}

HermitianMatrix build_A_zf(const DualPoint& duals, const EffectiveChannels& eff,
                           const ZfLifted& zf, const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const double gamma = gamma_threshold(params);
  const auto k = zf.h_tilde_p.rows();
  CMatrix a = two_ps * (1.0 - duals.lambda1 * gamma) * zf.h_tilde_p +
              two_ps * params.eta * eff.h_rd_norm2 * duals.lambda2 * zf.h_bar_p -
              duals.lambda3 * CMatrix::Identity(k, k);
  return HermitianMatrix(a, 1e-9);
}

HermitianMatrix build_B_zf(const DualPoint& duals, const EffectiveChannels& eff,
                           const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const auto m = eff.h_tilde.rows();
  CMatrix b = two_ps * duals.lambda1 * eff.h_tilde +
              two_ps * duals.lambda2 *
                  (eff.h_sd_outer + params.eta * eff.h_rd_norm2 * eff.h_bar) -
              duals.lambda3 * CMatrix::Identity(m, m);
  return HermitianMatrix(b, 1e-9);
}

double dual_objective_p42(const DualPoint& duals, double t,
                          const SystemParams& params) {
  const double gamma = gamma_threshold(params);
  const double b = (t + duals.lambda1 * gamma) * params.sigma_r2_tilde;
  const double c = duals.lambda2 * gamma * params.sigma_d2;
  return -b - c - 2.0 * std::sqrt(std::max(0.0, b * c)) - t * params.sigma_r2 -
         duals.lambda1 * gamma * params.sigma_r2 + duals.lambda3;
}

DualSolveResult solve_dual_p42(double t, const EffectiveChannels& eff,
                               const ZfLifted& zf, const SystemParams& params,
                               const LmiOptions& options) {
  const double gamma = gamma_threshold(params);
  if (!(t > 0.0)) throw DomainError("solve_dual_p42: t must be positive");
  if (!(gamma > 0.0)) throw DomainError("solve_dual_p42: needs gamma' > 0");
  const double two_ps = 2.0 * params.ps;
  const double relay = params.eta * eff.h_rd_norm2;
  const auto m = eff.h_tilde.rows();
  const auto k = zf.h_tilde_p.rows();

  // Variables: lambda1 (SIC), lambda2 (QoS), lambda3 (power), s.
  enum { kL1, kL2, kL3, kS, kVars };
  LmiProgram prog(kVars);
  prog.cost(kL1) = -gamma * (params.sigma_r2_tilde + params.sigma_r2);
  prog.cost(kL2) = -gamma * params.sigma_d2;
  prog.cost(kL3) = 1.0;
  prog.cost(kS) = -2.0;
  prog.cost_offset = -t * (params.sigma_r2_tilde + params.sigma_r2);

  AffineHermitianMap block_a(k, kVars);
  block_a.constant() = two_ps * zf.h_tilde_p;
  block_a.coefficient(kL1) = -two_ps * gamma * zf.h_tilde_p;
  block_a.coefficient(kL2) = two_ps * relay * zf.h_bar_p;
  block_a.coefficient(kL3) = -CMatrix::Identity(k, k);

  const CMatrix qos = eff.h_sd_outer + relay * eff.h_bar;
  AffineHermitianMap block_b(m, kVars);
  block_b.coefficient(kL1) = two_ps * eff.h_tilde;
  block_b.coefficient(kL2) = two_ps * qos;
  block_b.coefficient(kL3) = -CMatrix::Identity(m, m);

  prog.blocks.push_back(std::move(block_a));
  prog.blocks.push_back(std::move(block_b));
  prog.blocks.push_back(detail::geometric_mean_block(
      kVars, kL1, kL2, kS, t * params.sigma_r2_tilde, gamma * params.sigma_r2_tilde,
      gamma * params.sigma_d2));

  const double scale = two_ps * eff.h_sr_tilde.squaredNorm() +
                       two_ps * relay * max_eigenvalue(HermitianMatrix(eff.h_bar, 1e-9));
  const double qos_gain =
      std::max(two_ps * max_eigenvalue(HermitianMatrix(qos, 1e-9)), 1e-300);
  RVector natural(kVars);
  natural << 1.0 / gamma, scale / qos_gain, scale, 0.0;
  prog.lower << 0.0, detail::kStrictFloor, 0.0,
      -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kL3 + 1; ++i) {
    prog.upper(i) = detail::kCapFactor * natural(i);
  }

  DualPoint start;
  start.lambda1 = 0.5 / gamma;
  start.lambda2 = 0.1 * natural(kL2);
  const double lift = std::max(max_eigenvalue(build_A_zf(start, eff, zf, params)),
                               max_eigenvalue(build_B_zf(start, eff, params)));
  start.lambda3 = std::max(0.0, lift) + 0.1 * scale;
  const double b0 = (t + start.lambda1 * gamma) * params.sigma_r2_tilde;
  const double c0 = start.lambda2 * gamma * params.sigma_d2;
  RVector x0(kVars);
  x0 << start.lambda1, start.lambda2, start.lambda3, 0.5 * std::sqrt(b0 * c0);

  const LmiResult res = solve_lmi(prog, x0, options);

  DualSolveResult out;
  out.duals = {res.x(kL1), res.x(kL2), res.x(kL3), 0.0};
  out.t = t;
  out.gamma_split = 0.0;
  out.a = gamma * params.sigma_d2 / two_ps;
  out.b = (t + out.duals.lambda1 * gamma) * params.sigma_r2_tilde;
  out.c = out.duals.lambda2 * gamma * params.sigma_d2;
  out.trace = res.outer_trace;
  out.newton_steps = res.newton_steps;
  out.unbounded = detail::near_cap(res.x, prog.upper, kL3 + 1);
  out.d_star = dual_objective_p42(out.duals, t, params);
  out.rho_star = rho_star(out.b, out.c).rho;
  if (!out.unbounded && !(out.duals.lambda2 > 1e-8)) {
    throw NumericalError("solve_dual_p42: QoS multiplier is not positive");
  }
  return out;
}

RecoveredBeamformers recover_zf_beamformers(const DualSolveResult& dsr,
                                            const EffectiveChannels& eff,
                                            const ZfLifted& zf,
                                            const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const double relay = params.eta * eff.h_rd_norm2;
  const auto a_star = build_A_zf(dsr.duals, eff, zf, params);
  const auto b_star = build_B_zf(dsr.duals, eff, params);
  const double ref = std::max(dsr.duals.lambda3, 1e-300);

  const auto u1 = detail::null_direction(a_star, ref);
  const auto u2 = detail::null_direction(b_star, ref);
  RecoveredBeamformers rec;
  rec.u1 = zf.v_tilde * u1.vector;
  rec.u2 = u2.vector;
  rec.degenerate = u1.degenerate || u2.degenerate;

  const double rho = dsr.rho_star;
  const double s1 = std::norm(zf.h_sr_tilde_p.dot(u1.vector));
  rec.w1_zero = u1.empty || !(s1 > 0.0);
  double tau1_sq = 0.0;
  if (!rec.w1_zero) {
    tau1_sq = (dsr.d_star + dsr.t * dinkelbach_denominator(rho, params)) /
              (two_ps * s1);
    if (!(tau1_sq > 0.0)) {
      tau1_sq = 0.0;
      rec.w1_zero = true;
    }
  }
  const double e1 = u1.vector.dot(zf.h_bar_p * u1.vector).real();
  const double d2 = std::norm(eff.h_sd.dot(rec.u2));
  const double e2 = rec.u2.dot(eff.h_bar * rec.u2).real();
  const double den = d2 + relay * e2;
  double tau2_sq = 0.0;
  if (den > 0.0) {
    tau2_sq = std::max(0.0, (dsr.a / (1.0 - rho) - tau1_sq * relay * e1) / den);
  }
  rec.tau1 = std::sqrt(tau1_sq);
  rec.tau2 = std::sqrt(tau2_sq);
  rec.w1 = rec.tau1 * rec.u1;
  rec.w2 = rec.tau2 * rec.u2;
  return rec;
}

TxSolution dinkelbach_zf(const ChannelRealization& ch, const CVector& w_r,
                         const SystemParams& params, double eps,
                         DinkelbachTrace* trace) {
  params.validate();
  ch.validate(params);
  if (!(eps > 0.0)) throw DomainError("dinkelbach_zf: eps must be positive");
  const auto eff = EffectiveChannels::from(ch, w_r);
  const auto zf = ZfLifted::from(eff);
  if (gamma_threshold(params) == 0.0) {
    return detail::direct_only_design(ch, w_r,
                                      zf.v_tilde * zf.h_sr_tilde_p);
  }
  return detail::run_dinkelbach(
      ch, w_r, eff, params, eps, QosForm::zf_relaxed, trace, [&](double t) {
        const DualSolveResult dsr = solve_dual_p42(t, eff, zf, params);
        if (dsr.unbounded) {
          throw InfeasibleError("dinkelbach_zf: target rate of D cannot be met");
        }
        detail::InnerSolve out;
        out.f = dsr.d_star;
        out.rho = dsr.rho_star;
        out.beams = recover_zf_beamformers(dsr, eff, zf, params);
        return out;
      });
}

}  // namespace coopnoma
