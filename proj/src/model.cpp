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

#include "coopnoma/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace coopnoma {

void SystemParams::validate() const {
  std::ostringstream err;
  if (!(ps > 0.0) || !std::isfinite(ps)) err << "ps must be > 0; ";
  if (!(sigma_d2 > 0.0)) err << "sigma_d2 must be > 0; ";
  if (!(sigma_r2 > 0.0)) err << "sigma_r2 must be > 0; ";
  if (!(sigma_r2_tilde > 0.0)) err << "sigma_r2_tilde must be > 0; ";
  if (!(eta > 0.0 && eta <= 1.0)) err << "eta must lie in (0, 1]; ";
  if (!(rd_min >= 0.0) || !std::isfinite(rd_min)) err << "rd_min must be >= 0; ";
  if (m < 2) err << "m must be >= 2; ";
  if (n < 1) err << "n must be >= 1; ";
  const auto msg = err.str();
  if (!msg.empty()) throw ValidationError("SystemParams: " + msg);
}

void PathLossSpec::validate() const {
  if (!(pl_sr_db >= 0.0 && pl_sd_db >= 0.0 && pl_rd_db >= 0.0)) {
    throw ValidationError("PathLossSpec: path losses must be >= 0 dB");
  }
}

void ChannelRealization::validate(const SystemParams& params) const {
  if (h_sr.rows() != params.m || h_sr.cols() != params.n) {
    throw ValidationError("ChannelRealization: h_sr must be M x N");
  }
  if (h_sd.size() != params.m) {
    throw ValidationError("ChannelRealization: h_sd must have length M");
  }
  if (h_rd.size() != params.n) {
    throw ValidationError("ChannelRealization: h_rd must have length N");
  }
  if (!h_sr.allFinite() || !h_sd.allFinite() || !h_rd.allFinite()) {
    throw ValidationError("ChannelRealization: non-finite entry");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double gamma_threshold(const SystemParams& params) {
  if (!(params.rd_min >= 0.0)) {
    throw ValidationError("gamma_threshold: rd_min must be >= 0");
  }
  return std::exp2(2.0 * params.rd_min) - 1.0;
}

ChannelRealization sample_channel(const SystemParams& params,
                                  const PathLossSpec& pl, std::uint64_t seed) {
  params.validate();
  pl.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Real and imaginary parts each carry half the link variance.
  auto draw = [&](double variance) {
    const double sd = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return cdouble(sd * re, sd * im);
  };

  ChannelRealization ch;
  ch.h_sr.resize(params.m, params.n);
  ch.h_sd.resize(params.m);
  ch.h_rd.resize(params.n);
  const double v_sr = 1.0 / db_to_linear(pl.pl_sr_db);
  const double v_sd = 1.0 / db_to_linear(pl.pl_sd_db);
  const double v_rd = 1.0 / db_to_linear(pl.pl_rd_db);
  for (int j = 0; j < params.n; ++j) {
    for (int i = 0; i < params.m; ++i) ch.h_sr(i, j) = draw(v_sr);
  }
  for (int i = 0; i < params.m; ++i) ch.h_sd(i) = draw(v_sd);
  for (int j = 0; j < params.n; ++j) ch.h_rd(j) = draw(v_rd);
  return ch;
}

ChannelRealization fig2_channel() {
  using c = cdouble;
  ChannelRealization ch;
  ch.h_sr.resize(2, 4);
  ch.h_sr << c(0.4035, 0.1087), c(0.2944, 0.2835), c(-0.3285, -0.2116), c(0.7751, 0.0767),
      c(-0.1413, 0.0740), c(0.3469, 0.2438), c(0.0396, -0.0981), c(-0.0480, -0.0131);
  ch.h_sd.resize(2);
  ch.h_sd << c(-0.0137, 0.0123), c(0.0054, 0.0105);
  ch.h_rd = CVector::Constant(4, c(std::sqrt(0.0723 / 4.0), 0.0));
  return ch;
}

}  // namespace coopnoma
