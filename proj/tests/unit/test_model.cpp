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
#include <set>

#include "coopnoma/model.hpp"

using namespace coopnoma;

TEST_CASE("gamma threshold") {
  SystemParams p;
  p.rd_min = 0.0;
  CHECK(gamma_threshold(p) == doctest::Approx(0.0));
  p.rd_min = 0.5;
  CHECK(gamma_threshold(p) == doctest::Approx(1.0));
  p.rd_min = 2.0;
  CHECK(gamma_threshold(p) == doctest::Approx(15.0));
  double prev = -1.0;
  for (double r = 0.0; r < 4.0; r += 0.1) {
    p.rd_min = r;
    CHECK(gamma_threshold(p) > prev);
    prev = gamma_threshold(p);
  }
}

TEST_CASE("db conversion") {
  CHECK(db_to_linear(30.0) == doctest::Approx(1000.0));
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(-10.0) == doctest::Approx(0.1));
}

TEST_CASE("params validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.eta = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.ps = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.m = 0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.rd_min = -0.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("sample_channel is deterministic per seed") {
  SystemParams p;
  PathLossSpec pl;
  const auto a = sample_channel(p, pl, 42);
  const auto b = sample_channel(p, pl, 42);
  CHECK(a.h_sr == b.h_sr);
  CHECK(a.h_sd == b.h_sd);
  CHECK(a.h_rd == b.h_rd);
  CHECK(a.h_sr.rows() == 2);
  CHECK(a.h_sr.cols() == 4);
  CHECK(a.h_sd.size() == 2);
  CHECK(a.h_rd.size() == 4);
}

TEST_CASE("distinct seeds give distinct channels") {
  SystemParams p;
  PathLossSpec pl;
  std::set<double> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(sample_channel(p, pl, s).h_sr(0, 0).real());
  CHECK(seen.size() == 100);
}

TEST_CASE("path loss sets entry variance") {
  SystemParams p;
  p.n = 1;
  double sum_sd = 0.0;
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) sum_sd += sample_channel(p, {10.0, 30.0, 25.0}, i).h_sd.squaredNorm() / 2.0;
  CHECK(sum_sd / draws == doctest::Approx(1e-3).epsilon(0.02));

  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += sample_channel(p, {0.0, 0.0, 0.0}, i).h_sr.squaredNorm() / 2.0;
  CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("fig2 channel") {
  const auto ch = fig2_channel();
  CHECK(ch.h_sr.rows() == 2);
  CHECK(ch.h_sr.cols() == 4);
  CHECK(ch.h_rd.squaredNorm() == doctest::Approx(0.0723).epsilon(1e-12));
  CHECK(ch.h_sd(0).real() == doctest::Approx(-0.0137));
  CHECK(ch.h_sd(0).imag() == doctest::Approx(0.0123));
  CHECK(ch.h_sr(0, 3).real() == doctest::Approx(0.7751));
  CHECK(ch.h_sr(1, 0).imag() == doctest::Approx(0.0740));
  SystemParams p;
  CHECK_NOTHROW(ch.validate(p));
}
