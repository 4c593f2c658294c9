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

#include "coopnoma/rx_filter.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "coopnoma/linalg.hpp"

namespace coopnoma {

FilterGeometry FilterGeometry::from_vectors(CVector h1, CVector h2) {
  if (h1.size() != h2.size()) {
    throw ValidationError("FilterGeometry: h1 and h2 differ in length");
  }
  FilterGeometry g;
  g.h1 = std::move(h1);
  g.h2 = std::move(h2);
  const auto n = g.h1.size();
  if (g.h2.norm() > 0.0) {
    const CVector par = project_onto(g.h1, g.h2);
    const CVector perp = g.h1 - par;
    g.alpha = par.norm();
    g.beta = perp.norm();
    // Unit h2 direction carrying the phase of h2^H h1.
    const cdouble inner = g.h2.dot(g.h1);
    const cdouble phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : 1.0;
    g.e_par = g.h2.normalized() * phase;
    g.e_perp = g.beta > 0.0 ? CVector(perp / g.beta) : CVector::Zero(n);
  } else {
    g.alpha = 0.0;
    g.beta = g.h1.norm();
    g.e_par = CVector::Zero(n);
    g.e_perp = g.beta > 0.0 ? CVector(g.h1 / g.beta) : CVector::Zero(n);
  }
  return g;
}

FilterGeometry FilterGeometry::from(const ChannelRealization& ch, const CVector& w1,
                                    const CVector& w2) {
  return from_vectors(ch.h_sr.adjoint() * w1, ch.h_sr.adjoint() * w2);
}

double filter_objective(const FilterGeometry& geom, double lambda) {
  const double v = std::sqrt(lambda) * geom.alpha + std::sqrt(1.0 - lambda) * geom.beta;
  return v * v;
}

double filter_sic_margin(const FilterGeometry& geom, double lambda, double rho,
                         const SystemParams& params) {
  const double gamma = gamma_threshold(params);
  const double k = 2.0 * rho * params.ps;
  const double n0 = rho * params.sigma_r2 + params.sigma_r2_tilde;
  return k * lambda * geom.h2.squaredNorm() -
         gamma * (k * filter_objective(geom, lambda) + n0);
}

CVector filter_from_lambda(const FilterGeometry& geom, double lambda) {
  return std::sqrt(lambda) * geom.e_par + std::sqrt(1.0 - lambda) * geom.e_perp;
}

bool filter_feasible(const FilterGeometry& geom, double rho,
                     const SystemParams& params) {
  return filter_sic_margin(geom, 1.0, rho, params) >= 0.0;
}

namespace {

// Smallest lambda in [0, 1] with a nonnegative margin. The margin is convex
// with a negative value at 0 and a nonnegative one at 1, so the crossing is
// unique.
double crossing(const FilterGeometry& geom, double rho, const SystemParams& params) {
  const double gamma = gamma_threshold(params);
  const double k = 2.0 * rho * params.ps;
  const double n0 = rho * params.sigma_r2 + params.sigma_r2_tilde;
  const double a2 = geom.alpha * geom.alpha;
  const double b2 = geom.beta * geom.beta;
  // Squaring p lambda + q = r sqrt(lambda (1 - lambda)) gives a quadratic.
  const double p = k * geom.h2.squaredNorm() - gamma * k * a2 + gamma * k * b2;
  const double q = -gamma * k * b2 - gamma * n0;
  const double r = 2.0 * gamma * k * geom.alpha * geom.beta;
  const double qa = p * p + r * r;
  const double qb = 2.0 * p * q - r * r;
  const double qc = q * q;

  const auto margin = [&](double l) { return filter_sic_margin(geom, l, rho, params); };
  std::vector<double> candidates;
  if (qa > 0.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double w = -0.5 * (qb + (qb >= 0.0 ? root : -root));
      candidates.push_back(w / qa);
      if (w != 0.0) candidates.push_back(qc / w);
    }
  }
  // Keep the root of the unsquared equation; squaring may add a spurious one.
  double lo = 0.0;
  double hi = 1.0;
  for (double c : candidates) {
    if (!(c >= -1e-12 && c <= 1.0 + 1e-12)) continue;
    const double l = std::clamp(c, 0.0, 1.0);
    if (p * l + q >= -1e-9 * (std::abs(p) + std::abs(q))) {
      hi = l;
      break;
    }
  }
  // Polish: bracket the crossing and bisect to machine precision.
  if (margin(hi) < 0.0) hi = 1.0;
  double step = 1e-12;
  lo = std::max(0.0, hi - step);
  while (lo > 0.0 && margin(lo) >= 0.0) {
    hi = lo;
    step *= 4.0;
    lo = std::max(0.0, hi - step);
  }
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (margin(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

ReceiveFilter optimal_receive_filter(const FilterGeometry& geom, double rho,
                                     const SystemParams& params) {
  if (!(geom.h1.norm() > 0.0)) {
    throw ValidationError("optimal_receive_filter: h1 is zero");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("optimal_receive_filter: rho must lie in (0, 1]");
  }
  const double gamma = gamma_threshold(params);
  const double h1_norm2 = geom.alpha * geom.alpha + geom.beta * geom.beta;
  ReceiveFilter out;
  // Matched filter: the unconstrained maximizer.
  const double matched = geom.h2.norm() > 0.0 ? geom.alpha * geom.alpha / h1_norm2 : 0.0;
  if (gamma == 0.0 || filter_sic_margin(geom, matched, rho, params) >= 0.0) {
    out.w_r = geom.h1 / geom.h1.norm();
    out.lambda = matched;
    out.active = false;
    return out;
  }
  if (!filter_feasible(geom, rho, params)) {
    throw InfeasibleError("optimal_receive_filter: SIC constraint cannot be met");
  }
  if (!(geom.beta > 0.0)) {
    // h1 parallel to h2: the plane collapses to one direction.
    out.w_r = geom.e_par;
    out.lambda = 1.0;
    out.active = true;
    return out;
  }
  const double lambda = crossing(geom, rho, params);
  if (filter_sic_margin(geom, lambda, rho, params) < 0.0) {
    throw NumericalError("optimal_receive_filter: root search left the feasible set");
  }
  out.lambda = lambda;
  out.w_r = filter_from_lambda(geom, lambda);
  out.w_r.normalize();
  out.active = true;
  return out;
}

}  // namespace coopnoma
