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

#include "coopnoma/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "coopnoma/linalg.hpp"

namespace coopnoma {

namespace {

constexpr double kPi = std::numbers::pi;

CVector direction(double theta, double phi) {
  CVector u(2);
  u(0) = std::cos(theta);
  u(1) = std::sin(theta) * std::polar(1.0, phi);
  return u;
}

struct DirGains {
  double s = 0.0;
  double d = 0.0;
  double e = 0.0;
};

DirGains gains_of(const ChannelRealization& ch, const CVector& g, const CVector& u) {
  return {std::norm(g.dot(u)), std::norm(ch.h_sd.dot(u)),
          (ch.h_sr.adjoint() * u).squaredNorm()};
}

// Axis of the search box: `count` points centered on `center` spaced `step`
// apart, clamped to [lo, hi].
std::vector<double> axis(double center, double half, int count, double lo, double hi) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i < count; ++i) {
    const double v = center - half + (2.0 * half) * (i + 0.5) / count;
    out.push_back(std::clamp(v, lo, hi));
  }
  out.push_back(std::clamp(center, lo, hi));
  return out;
}

// Box around the incumbent: theta1, phi1, theta2, phi2, rho.
using Point = std::array<double, 5>;

struct Incumbent {
  bool feasible = false;
  double sinr = -1.0;
  Point x{};
  double p1 = 0.0;
};

OracleResult search(const ChannelRealization& ch, const CVector& w_r,
                    const SystemParams& params, const OracleOptions& options,
                    bool zf) {
  params.validate();
  ch.validate(params);
  if (params.m != 2) throw ValidationError("oracle: only M = 2 is supported");
  if (options.resolution < 2 || options.levels < 1) {
    throw ValidationError("oracle: resolution >= 2 and levels >= 1 required");
  }
  const CVector w = w_r.normalized();
  const CVector g = ch.h_sr * w;
  const double rd2 = ch.h_rd.squaredNorm();
  const QosForm form = zf ? QosForm::zf_relaxed : QosForm::combined;
  const int res = options.resolution;

  CVector zf_dir;
  if (zf) zf_dir = null_space_of_row(ch.h_sd).col(0);

  Point center{kPi / 4, kPi, kPi / 4, kPi, 0.5};
  Point half{kPi / 4, kPi, kPi / 4, kPi, 0.5};
  Incumbent best;
  OracleResult out;

  for (int level = 0; level < options.levels; ++level) {
    const auto th1 = axis(center[0], half[0], zf ? 1 : res, 0.0, kPi / 2);
    const auto ph1 = axis(center[1], half[1], zf ? 1 : res, -4 * kPi, 4 * kPi);
    const auto th2 = axis(center[2], half[2], res, 0.0, kPi / 2);
    const auto ph2 = axis(center[3], half[3], res, -4 * kPi, 4 * kPi);
    const auto rho = axis(center[4], half[4], res, 1e-6, 1.0 - 1e-6);

    std::vector<DirGains> second;
    second.reserve(th2.size() * ph2.size());
    for (double a : th2) {
      for (double b : ph2) second.push_back(gains_of(ch, g, direction(a, b)));
    }

    for (std::size_t i1 = 0; i1 < th1.size(); ++i1) {
      for (std::size_t j1 = 0; j1 < ph1.size(); ++j1) {
        const CVector u1 = zf ? zf_dir : direction(th1[i1], ph1[j1]);
        const DirGains first = gains_of(ch, g, u1);
        for (std::size_t i2 = 0; i2 < th2.size(); ++i2) {
          for (std::size_t j2 = 0; j2 < ph2.size(); ++j2) {
            const DirGains& sec = second[i2 * ph2.size() + j2];
            const DirectionGains dg{first.s, sec.s, first.d, sec.d, first.e, sec.e, rd2};
            for (double r : rho) {
              const auto p1 = max_feasible_p1(dg, r, params, form);
              if (!p1) continue;
              const double sinr = 2.0 * r * params.ps * (*p1) * first.s /
                                  (r * params.sigma_r2 + params.sigma_r2_tilde);
              if (sinr > best.sinr) {
                best.feasible = true;
                best.sinr = sinr;
                best.x = {th1[i1], ph1[j1], th2[i2], ph2[j2], r};
                best.p1 = *p1;
              }
            }
          }
        }
      }
    }
    out.level_best.push_back(best.feasible ? best.sinr : 0.0);
    if (!best.feasible) break;
    center = best.x;
    for (int k = 0; k < 5; ++k) half[k] = 2.0 * half[k] / res;
  }

  out.feasible = best.feasible;
  if (best.feasible) {
    const CVector u1 = zf ? zf_dir : direction(best.x[0], best.x[1]);
    const CVector u2 = direction(best.x[2], best.x[3]);
    out.point = make_solution(ch, std::sqrt(best.p1) * u1,
                              std::sqrt(1.0 - best.p1) * u2, best.x[4], w);
    out.best_sinr_r = best.sinr;
    out.best_rate_r = 0.5 * std::log2(1.0 + best.sinr);
  }
  return out;
}

}  // namespace

OracleResult brute_force_p2(const ChannelRealization& ch, const CVector& w_r,
                            const SystemParams& params, const OracleOptions& options) {
  return search(ch, w_r, params, options, false);
}

OracleResult brute_force_zf(const ChannelRealization& ch, const CVector& w_r,
                            const SystemParams& params, const OracleOptions& options) {
  return search(ch, w_r, params, options, true);
}

double grid_min_rho(double b, double c, int points) {
  if (points < 3) throw ValidationError("grid_min_rho: need at least 3 points");
  const auto f = [&](double r) { return b / r + c / (1.0 - r); };
  int best = 1;
  double best_val = f(1.0 / points);
  for (int i = 2; i < points; ++i) {
    const double v = f(static_cast<double>(i) / points);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = static_cast<double>(best - 1) / points;
  double hi = static_cast<double>(best + 1) / points;
  lo = std::max(lo, 1e-300);
  // Golden section on the bracketing cell pair.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

GridFilterResult grid_filter(const FilterGeometry& geom, double rho,
                             const SystemParams& params, int points) {
  if (points < 2) throw ValidationError("grid_filter: need at least 2 points");
  const auto at = [&](int i) { return static_cast<double>(i) / (points - 1); };
  const auto feasible = [&](double lambda) {
    return filter_sic_margin(geom, lambda, rho, params) >= 0.0;
  };
  GridFilterResult out;
  int best = -1;
  for (int i = 0; i < points; ++i) {
    const double lambda = at(i);
    if (!feasible(lambda)) continue;
    const double v = filter_objective(geom, lambda);
    if (!out.feasible || v > out.value) {
      out.feasible = true;
      out.value = v;
      out.lambda = lambda;
      best = i;
    }
  }
  if (!out.feasible) return out;

  // Polish inside the neighbouring cells: bisect the constraint boundary if
  // the left neighbour is infeasible, then golden section on the objective.
  double lo = best > 0 ? at(best - 1) : 0.0;
  const double hi = best + 1 < points ? at(best + 1) : 1.0;
  if (!feasible(lo)) {
    double bad = lo, good = out.lambda;
    for (int k = 0; k < 200 && good - bad > 1e-16; ++k) {
      const double mid = 0.5 * (bad + good);
      (feasible(mid) ? good : bad) = mid;
    }
    lo = good;
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = filter_objective(geom, x1), f2 = filter_objective(geom, x2);
  for (int k = 0; k < 200 && b - a > 1e-15; ++k) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = filter_objective(geom, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = filter_objective(geom, x2);
    }
  }
  for (double cand : {lo, 0.5 * (a + b)}) {
    if (!feasible(cand)) continue;
    const double v = filter_objective(geom, cand);
    if (v > out.value) {
      out.value = v;
      out.lambda = cand;
    }
  }
  return out;
}

}  // namespace coopnoma
