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

#include "coopnoma/alternating.hpp"

#include <cmath>
#include <sstream>

#include "coopnoma/linalg.hpp"
#include "coopnoma/optimal_tx.hpp"
#include "coopnoma/rx_filter.hpp"
#include "coopnoma/zf_tx.hpp"

namespace coopnoma {

std::string to_string(Scheme scheme) {
  return scheme == Scheme::optimal ? "optimal" : "zf";
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::converged:
      return "converged";
    case Termination::max_iter:
      return "max_iter";
    case Termination::no_relay_power:
      return "no_relay_power";
  }
  return "unknown";
}

CVector init_receiver(const ChannelRealization& ch) {
  return dominant_right_singular_vector(ch.h_sr);
}

TxSolution transmit_design(const ChannelRealization& ch, const CVector& w_r,
                           const SystemParams& params, Scheme scheme) {
  return scheme == Scheme::optimal ? dinkelbach_optimal(ch, w_r, params)
                                   : dinkelbach_zf(ch, w_r, params);
}

namespace {

IterationRecord record_of(const ChannelRealization& ch, const TxSolution& sol,
                          const SystemParams& params) {
  const auto report = audit(ch, sol, params);
  IterationRecord r;
  r.rate_r = rate_r(ch, sol, params);
  r.rate_d = rate_d(ch, sol, params);
  r.rho = sol.rho;
  r.sic_slack = report.sic_slack;
  r.d_slack = report.d_slack;
  r.power_slack = report.power_slack;
  return r;
}

std::string dump(const IterationTrace& trace) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    os << "\n  iter " << i << ": R_R=" << trace.records[i].rate_r
       << " R_D=" << trace.records[i].rate_d << " rho=" << trace.records[i].rho;
  }
  return os.str();
}

}  // namespace

AlternatingResult alternate(const ChannelRealization& ch, const SystemParams& params,
                            Scheme scheme, int max_iter, double tol) {
  if (max_iter < 1) throw ValidationError("alternate: max_iter must be >= 1");
  if (!(tol >= 0.0)) throw ValidationError("alternate: tol must be >= 0");

  AlternatingResult out;
  out.solution = transmit_design(ch, init_receiver(ch), params, scheme);
  out.trace.records.push_back(record_of(ch, out.solution, params));

  for (int it = 1; it < max_iter; ++it) {
    const TxSolution& prev = out.solution;
    const auto geom = FilterGeometry::from(ch, prev.w1, prev.w2);
    if (!(geom.h1.norm() > 0.0)) {
      out.trace.reason = Termination::no_relay_power;
      return out;
    }
    const auto filter = optimal_receive_filter(geom, prev.rho, params);
    // The previous beamformers stay feasible under the new filter.
    TxSolution carried = make_solution(ch, prev.w1, prev.w2, prev.rho, filter.w_r);
    TxSolution next = transmit_design(ch, filter.w_r, params, scheme);

    const double prev_rate = out.trace.records.back().rate_r;
    IterationRecord rec = record_of(ch, next, params);
    const double carried_rate = rate_r(ch, carried, params);
    if (rec.rate_r < carried_rate) {
      next = std::move(carried);
      rec = record_of(ch, next, params);
      rec.kept_previous = true;
    }
    out.trace.records.push_back(rec);
    if (rec.rate_r < prev_rate - kMonotoneTol) {
      throw NumericalError("alternate: rate of R decreased" + dump(out.trace));
    }
    out.solution = std::move(next);
    if (std::abs(rec.rate_r - prev_rate) <= tol) {
      out.trace.reason = Termination::converged;
      return out;
    }
  }
  out.trace.reason = Termination::max_iter;
  return out;
}

double direct_transmission_rate(const ChannelRealization& ch,
                                const SystemParams& params) {
  return std::log2(1.0 + params.ps * ch.h_sd.squaredNorm() / params.sigma_d2);
}

}  // namespace coopnoma
