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

#include "coopnoma/optimal_tx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dual_common.hpp"

namespace coopnoma {

EffectiveChannels EffectiveChannels::from(const ChannelRealization& ch,
                                          const CVector& w_r) {
  if (w_r.size() != ch.h_sr.cols()) {
    throw ValidationError("EffectiveChannels: receive filter has wrong length");
  }
  EffectiveChannels eff;
  eff.h_sr_tilde = ch.h_sr * w_r;
  eff.h_tilde = eff.h_sr_tilde * eff.h_sr_tilde.adjoint();
  eff.h_bar = ch.h_sr * ch.h_sr.adjoint();
  eff.h_sd = ch.h_sd;
  eff.h_sd_outer = ch.h_sd * ch.h_sd.adjoint();
  eff.h_rd_norm2 = ch.h_rd.squaredNorm();
  return eff;
}

RhoStar rho_star(double b, double c) {
  if (!(b > 0.0) || !(c > 0.0) || !std::isfinite(b) || !std::isfinite(c)) {
    std::ostringstream os;
    os << "rho_star: need b > 0 and c > 0 (b=" << b << ", c=" << c << ")";
    throw DomainError(os.str());
  }
  const double root = std::sqrt(b * c);
  return {b / (b + root), b + c + 2.0 * root};
}

HermitianMatrix build_A(const DualPoint& duals, double gamma_split,
                        const EffectiveChannels& eff, const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const double gamma = gamma_threshold(params);
  const auto m = eff.h_tilde.rows();
  CMatrix a = two_ps * (1.0 - duals.lambda1 * gamma) * eff.h_tilde +
              duals.lambda3 * eff.h_bar -
              two_ps * duals.lambda2 * gamma_split * eff.h_sd_outer -
              duals.lambda4 * CMatrix::Identity(m, m);
  return HermitianMatrix(a, 1e-9);
}

HermitianMatrix build_B(const DualPoint& duals, const EffectiveChannels& eff,
                        const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const auto m = eff.h_tilde.rows();
  CMatrix b = two_ps * duals.lambda1 * eff.h_tilde + duals.lambda3 * eff.h_bar +
              two_ps * duals.lambda2 * eff.h_sd_outer -
              duals.lambda4 * CMatrix::Identity(m, m);
  return HermitianMatrix(b, 1e-9);
}

double energy_requirement(double gamma_split, const EffectiveChannels& eff,
                          const SystemParams& params) {
  return (gamma_threshold(params) - gamma_split) * params.sigma_d2 /
         (2.0 * params.eta * params.ps * eff.h_rd_norm2);
}

double dual_objective_p25(const DualPoint& duals, double t, double gamma_split,
                          const EffectiveChannels& eff, const SystemParams& params) {
  const double gamma = gamma_threshold(params);
  const double a = energy_requirement(gamma_split, eff, params);
  const double b = (t + duals.lambda1 * gamma) * params.sigma_r2_tilde;
  const double c = a * duals.lambda3;
  return -b - c - 2.0 * std::sqrt(std::max(0.0, b * c)) - t * params.sigma_r2 -
         duals.lambda1 * gamma * params.sigma_r2 -
         duals.lambda2 * gamma_split * params.sigma_d2 + duals.lambda4;
}

DualSolveResult solve_dual_p25(double t, double gamma_split,
                               const EffectiveChannels& eff,
                               const SystemParams& params,
                               const LmiOptions& options) {
  const double gamma = gamma_threshold(params);
  if (!(t > 0.0)) throw DomainError("solve_dual_p25: t must be positive");
  if (!(gamma_split >= 0.0) || !(gamma_split < gamma)) {
    throw DomainError("solve_dual_p25: need 0 <= gamma_split < gamma'");
  }
  if (!(eff.h_rd_norm2 > 0.0)) {
    throw DomainError("solve_dual_p25: relay-to-destination channel is zero");
  }
  const double two_ps = 2.0 * params.ps;
  const double a = energy_requirement(gamma_split, eff, params);
  const auto m = eff.h_tilde.rows();
  const CMatrix eye = CMatrix::Identity(m, m);

  // Variables: lambda1, lambda2, lambda3, lambda4, s (epigraph of sqrt(bc)).
  enum { kL1, kL2, kL3, kL4, kS, kVars };
  LmiProgram prog(kVars);
  prog.cost(kL1) = -gamma * (params.sigma_r2_tilde + params.sigma_r2);
  prog.cost(kL2) = -gamma_split * params.sigma_d2;
  prog.cost(kL3) = -a;
  prog.cost(kL4) = 1.0;
  prog.cost(kS) = -2.0;
  prog.cost_offset = -t * (params.sigma_r2_tilde + params.sigma_r2);

  AffineHermitianMap block_a(m, kVars);
  block_a.constant() = two_ps * eff.h_tilde;
  block_a.coefficient(kL1) = -two_ps * gamma * eff.h_tilde;
  block_a.coefficient(kL2) = -two_ps * gamma_split * eff.h_sd_outer;
  block_a.coefficient(kL3) = eff.h_bar;
  block_a.coefficient(kL4) = -eye;

  AffineHermitianMap block_b(m, kVars);
  block_b.coefficient(kL1) = two_ps * eff.h_tilde;
  block_b.coefficient(kL2) = two_ps * eff.h_sd_outer;
  block_b.coefficient(kL3) = eff.h_bar;
  block_b.coefficient(kL4) = -eye;

  prog.blocks.push_back(std::move(block_a));
  prog.blocks.push_back(std::move(block_b));
  prog.blocks.push_back(detail::geometric_mean_block(
      kVars, kL1, kL3, kS, t * params.sigma_r2_tilde, gamma * params.sigma_r2_tilde,
      a));

  const double signal = two_ps * eff.h_sr_tilde.squaredNorm();
  const double bar = std::max(max_eigenvalue(HermitianMatrix(eff.h_bar, 1e-9)),
                              1e-300);
  const double sd = std::max(two_ps * eff.h_sd.squaredNorm(), 1e-300);
  const double scale = signal + bar;
  RVector natural(kVars);
  natural << 1.0 / gamma, scale / sd, scale / bar, scale, 0.0;

  prog.lower << 0.0, 0.0, detail::kStrictFloor, 0.0,
      -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kL4 + 1; ++i) {
    prog.upper(i) = detail::kCapFactor * natural(i);
  }

  DualPoint start;
  start.lambda1 = 0.5 / gamma;
  start.lambda2 = 0.1 * natural(kL2);
  start.lambda3 = 0.1 * natural(kL3);
  start.lambda4 = 0.0;
  const double lift = std::max(max_eigenvalue(build_A(start, gamma_split, eff, params)),
                               max_eigenvalue(build_B(start, eff, params)));
  start.lambda4 = std::max(0.0, lift) + 0.1 * scale;
  const double b0 = (t + start.lambda1 * gamma) * params.sigma_r2_tilde;
  RVector x0(kVars);
  x0 << start.lambda1, start.lambda2, start.lambda3, start.lambda4,
      0.5 * std::sqrt(b0 * a * start.lambda3);

  const LmiResult res = solve_lmi(prog, x0, options);

  DualSolveResult out;
  out.duals = {res.x(kL1), res.x(kL2), res.x(kL3), res.x(kL4)};
  out.t = t;
  out.gamma_split = gamma_split;
  out.a = a;
  out.b = (t + out.duals.lambda1 * gamma) * params.sigma_r2_tilde;
  out.c = a * out.duals.lambda3;
  out.trace = res.outer_trace;
  out.newton_steps = res.newton_steps;
  out.unbounded = detail::near_cap(res.x, prog.upper, kL4 + 1);
  out.d_star = dual_objective_p25(out.duals, t, gamma_split, eff, params);
  out.rho_star = rho_star(out.b, out.c).rho;
  if (!out.unbounded && !(out.duals.lambda3 > 1e-8)) {
    throw NumericalError("solve_dual_p25: energy multiplier is not positive");
  }
  return out;
}

RecoveredBeamformers recover_beamformers(const DualSolveResult& dsr,
                                         const EffectiveChannels& eff,
                                         const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const auto a_star = build_A(dsr.duals, dsr.gamma_split, eff, params);
  const auto b_star = build_B(dsr.duals, eff, params);
  const double ref = std::max(dsr.duals.lambda4, 1e-300);

  RecoveredBeamformers rec;
  auto u1 = detail::null_direction(a_star, ref);
  auto u2 = detail::null_direction(b_star, ref);
  rec.u1 = u1.vector;
  rec.u2 = u2.vector;
  rec.degenerate = u1.degenerate || u2.degenerate;

  const double rho = dsr.rho_star;
  const double s1 = std::norm(eff.h_sr_tilde.dot(rec.u1));
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
  const double e1 = rec.u1.dot(eff.h_bar * rec.u1).real();
  const double e2 = rec.u2.dot(eff.h_bar * rec.u2).real();
  double tau2_sq = 0.0;
  if (e2 > 0.0) {
    tau2_sq = std::max(0.0, (dsr.a / (1.0 - rho) - tau1_sq * e1) / e2);
  }
  rec.tau1 = std::sqrt(tau1_sq);
  rec.tau2 = std::sqrt(tau2_sq);
  rec.w1 = rec.tau1 * rec.u1;
  rec.w2 = rec.tau2 * rec.u2;
  return rec;
}

double gamma_gradient(const DualSolveResult& dsr, const RecoveredBeamformers& rec,
                      const EffectiveChannels& eff, const SystemParams& params) {
  const double two_ps = 2.0 * params.ps;
  const double interference = std::norm(eff.h_sd.dot(rec.w1));
  return -two_ps * dsr.duals.lambda2 * interference -
         dsr.duals.lambda2 * params.sigma_d2 +
         dsr.duals.lambda3 * params.sigma_d2 /
             (two_ps * params.eta * eff.h_rd_norm2 * (1.0 - dsr.rho_star));
}

namespace {

struct GammaEval {
  double gamma = 0.0;
  DualSolveResult dual;
  RecoveredBeamformers beams;
  double gradient = 0.0;
};

GammaEval evaluate_gamma(double t, double gamma_split, const EffectiveChannels& eff,
                         const SystemParams& params) {
  GammaEval ev;
  ev.gamma = gamma_split;
  ev.dual = solve_dual_p25(t, gamma_split, eff, params);
  if (ev.dual.unbounded) {
    // No primal point: the capped multipliers still tell which side fails.
    RecoveredBeamformers none;
    none.w1 = CVector::Zero(eff.h_sd.size());
    ev.gradient = gamma_gradient(ev.dual, none, eff, params);
  } else {
    ev.beams = recover_beamformers(ev.dual, eff, params);
    ev.gradient = gamma_gradient(ev.dual, ev.beams, eff, params);
  }
  return ev;
}

}  // namespace

GammaSearchResult bisect_gamma(double t, const EffectiveChannels& eff,
                               const SystemParams& params, double delta) {
  const double gamma = gamma_threshold(params);
  if (!(gamma > 0.0)) throw DomainError("bisect_gamma: needs gamma' > 0");
  if (!(delta > 0.0)) throw DomainError("bisect_gamma: delta must be positive");
  double lo = 0.0;
  double hi = gamma * (1.0 - 1e-6);
  // The phase-one SINR of D never exceeds its interference-free MRT value,
  // so larger shares are infeasible.
  hi = std::min(hi, 2.0 * params.ps * eff.h_sd.squaredNorm() / params.sigma_d2);
  bool moved_lo = false;
  bool moved_hi = false;

  GammaSearchResult out;
  bool have_best = false;
  auto consider = [&](GammaEval& ev) {
    if (ev.dual.unbounded) return;
    if (!have_best || ev.dual.d_star > out.dual.d_star) {
      out.gamma = ev.gamma;
      out.dual = std::move(ev.dual);
      out.beams = std::move(ev.beams);
      have_best = true;
    }
  };

  while (hi - lo > delta) {
    const double mid = 0.5 * (lo + hi);
    GammaEval ev = evaluate_gamma(t, mid, eff, params);
    ++out.iterations;
    if (ev.gradient >= 0.0) {
      lo = mid;
      moved_lo = true;
    } else {
      hi = mid;
      moved_hi = true;
    }
    consider(ev);
  }
  if (!moved_lo || !moved_hi) {
    // The optimum sits at an end of the interval: evaluate that end too.
    GammaEval ev = evaluate_gamma(t, moved_lo ? hi : lo, eff, params);
    ++out.iterations;
    consider(ev);
    out.boundary = true;
  }
  if (!have_best) {
    throw InfeasibleError("bisect_gamma: no direct-link share admits a feasible point");
  }
  return out;
}

double dinkelbach_numerator(const TxSolution& sol, const EffectiveChannels& eff,
                            const SystemParams& params) {
  return 2.0 * params.ps * std::norm(eff.h_sr_tilde.dot(sol.w1));
}

double dinkelbach_denominator(double rho, const SystemParams& params) {
  return params.sigma_r2 + params.sigma_r2_tilde / rho;
}

std::optional<TxSolution> allocate_along(const ChannelRealization& ch,
                                         const CVector& w_r, const CVector& u1,
                                         const CVector& u2, double rho,
                                         const SystemParams& params, QosForm form) {
  const auto gains = direction_gains(ch, w_r, u1, u2);
  const auto p1 = max_feasible_p1(gains, rho, params, form);
  if (!p1) return std::nullopt;
  const double share = std::clamp(*p1, 0.0, 1.0);
  return make_solution(ch, std::sqrt(share) * u1, std::sqrt(1.0 - share) * u2, rho,
                       w_r);
}

namespace detail {

TxSolution finish_design(const ChannelRealization& ch, const CVector& w_r,
                         const RecoveredBeamformers& rec, double rho,
                         const SystemParams& params, QosForm form) {
  const auto m = ch.h_sd.size();
  if (!rec.w1_zero) {
    if (auto sol = allocate_along(ch, w_r, rec.u1, rec.u2, rho, params, form)) {
      return *sol;
    }
  }
  // All power on D's beamformer.
  if (auto sol = allocate_along(ch, w_r, CVector::Zero(m), rec.u2, rho, params, form)) {
    return *sol;
  }
  // The relaxation is feasible only with a higher-rank W2.
  throw InfeasibleError("no rank-one point meets the constraints of D");
}

TxSolution run_dinkelbach(const ChannelRealization& ch, const CVector& w_r,
                          const EffectiveChannels& eff, const SystemParams& params,
                          double eps, QosForm form, DinkelbachTrace* trace,
                          const std::function<InnerSolve(double)>& inner) {
  double t = eps;
  std::vector<double> t_trace;
  for (int k = 0; k < kDinkelbachMaxIter; ++k) {
    const InnerSolve step = inner(t);
    if (trace) {
      trace->t.push_back(t);
      trace->f.push_back(step.f);
      trace->gamma.push_back(step.gamma_split);
    }
    t_trace.push_back(t);
    TxSolution sol = finish_design(ch, w_r, step.beams, step.rho, params, form);
    if (step.beams.w1_zero || std::abs(step.f) <= eps) return sol;
    const double next =
        dinkelbach_numerator(sol, eff, params) / dinkelbach_denominator(sol.rho, params);
    if (!(next > t)) return sol;
    t = next;
  }
  throw NonConvergenceError("Dinkelbach iteration cap reached", {t}, t_trace);
}

TxSolution direct_only_design(const ChannelRealization& ch, const CVector& w_r,
                              const CVector& direction) {
  CVector w1 = direction;
  if (w1.norm() > 0.0) w1.normalize();
  return make_solution(ch, w1, CVector::Zero(ch.h_sd.size()), 1.0, w_r);
}

}  // namespace detail

TxSolution dinkelbach_optimal(const ChannelRealization& ch, const CVector& w_r,
                              const SystemParams& params, double eps,
                              DinkelbachTrace* trace) {
  params.validate();
  ch.validate(params);
  if (!(eps > 0.0)) throw DomainError("dinkelbach_optimal: eps must be positive");
  const auto eff = EffectiveChannels::from(ch, w_r);
  const double gamma = gamma_threshold(params);
  if (gamma == 0.0) {
    // No QoS constraint: all power to R along the effective channel.
    return detail::direct_only_design(ch, w_r, eff.h_sr_tilde);
  }
  const double delta = 1e-4 * gamma;
  return detail::run_dinkelbach(
      ch, w_r, eff, params, eps, QosForm::combined, trace, [&](double t) {
        GammaSearchResult gs = bisect_gamma(t, eff, params, delta);
        detail::InnerSolve out;
        out.f = gs.dual.d_star;
        out.gamma_split = gs.gamma;
        out.rho = gs.dual.rho_star;
        out.beams = std::move(gs.beams);
        return out;
      });
}

}  // namespace coopnoma
