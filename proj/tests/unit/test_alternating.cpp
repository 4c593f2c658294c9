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

#include <doctest.h>

#include <cmath>

#include "coopnoma/alternating.hpp"
#include "coopnoma/linalg.hpp"
#include "coopnoma/model.hpp"

using namespace coopnoma;

TEST_CASE("initial receive filter") {
  ChannelRealization ch = fig2_channel();
  const CVector w = init_receiver(ch);
  CHECK(std::abs(w.norm() - 1.0) <= 1e-12);
  const CVector v = dominant_right_singular_vector(ch.h_sr);
  CHECK(std::abs(std::abs(v.dot(w)) - 1.0) <= 1e-10);

  ch.h_sr.setZero();
  ch.h_sr(1, 0) = cdouble(0.3, 0.4);
  ch.h_sr(1, 3) = cdouble(-1.0, 0.2);
  const CVector single = init_receiver(ch);
  const CVector row = ch.h_sr.row(1).adjoint();
  CHECK(std::abs(std::abs(row.normalized().dot(single)) - 1.0) <= 1e-12);
}

TEST_CASE("one iteration equals the plain transmit design") {
  SystemParams p;
  p.rd_min = 2.0;
  const auto ch = fig2_channel();
  for (auto scheme : {Scheme::optimal, Scheme::zf}) {
    const auto one = alternate(ch, p, scheme, 1);
    const auto plain = transmit_design(ch, init_receiver(ch), p, scheme);
    CHECK(rate_r(ch, one.solution, p) == doctest::Approx(rate_r(ch, plain, p)).epsilon(1e-12));
    CHECK(one.trace.records.size() == 1);
  }
}

TEST_CASE("alternation is monotone and converges") {
  SystemParams p;
  PathLossSpec pl;
  int feasible = 0;
  for (std::uint64_t seed = 400; seed < 412; ++seed) {
    p.rd_min = 1.0;
    const auto ch = sample_channel(p, pl, seed);
    for (auto scheme : {Scheme::optimal, Scheme::zf}) {
      try {
        const auto res = alternate(ch, p, scheme);
        ++feasible;
        const auto& rec = res.trace.records;
        for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i].rate_r >= rec[i - 1].rate_r - kMonotoneTol);
        CHECK(res.trace.reason == Termination::converged);
        CHECK(audit(ch, res.solution, p).all_ok());
        CHECK(res.trace.records.back().rate_r == doctest::Approx(rate_r(ch, res.solution, p)));
      } catch (const InfeasibleError&) {
      }
    }
  }
  CHECK(feasible > 0);
}

TEST_CASE("validation of iteration controls") {
  const auto ch = fig2_channel();
  SystemParams p;
  CHECK_THROWS_AS(alternate(ch, p, Scheme::optimal, 0), ValidationError);
  CHECK_THROWS_AS(alternate(ch, p, Scheme::optimal, 5, -1.0), ValidationError);
}

TEST_CASE("direct transmission rate") {
  SystemParams p;
  ChannelRealization ch = fig2_channel();
  ch.h_sd.setZero();
  CHECK(direct_transmission_rate(ch, p) == 0.0);
  ch.h_sd(0) = std::sqrt(3.0 / p.ps);
  CHECK(direct_transmission_rate(ch, p) == doctest::Approx(2.0));
}

TEST_CASE("names") {
  CHECK(to_string(Scheme::optimal) == "optimal");
  CHECK(to_string(Scheme::zf) == "zf");
  CHECK(to_string(Termination::converged) == "converged");
}
