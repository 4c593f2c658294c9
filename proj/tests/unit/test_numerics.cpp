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

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "coopnoma/linalg.hpp"
#include "coopnoma/lmi.hpp"
#include "helpers.hpp"

using namespace coopnoma;

namespace {

// Largest real root of det(xI - A) via Faddeev-LeVerrier and a companion matrix.
double char_poly_max_root(const CMatrix& a) {
  const Eigen::Index k = a.rows();
  std::vector<cdouble> c(static_cast<std::size_t>(k) + 1);
  c[static_cast<std::size_t>(k)] = 1.0;
  CMatrix m = CMatrix::Zero(k, k);
  for (Eigen::Index j = 1; j <= k; ++j) {
    m = a * m + c[static_cast<std::size_t>(k - j + 1)] * CMatrix::Identity(k, k);
    c[static_cast<std::size_t>(k - j)] = -(a * m).trace() / static_cast<double>(j);
  }
  CMatrix comp = CMatrix::Zero(k, k);
  for (Eigen::Index i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) comp(i, k - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<CMatrix> es(comp);
  double best = -1e300;
  for (Eigen::Index i = 0; i < k; ++i) best = std::max(best, es.eigenvalues()(i).real());
  return best;
}

}  // namespace

TEST_CASE("max eigenvalue") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -2.0;
  CHECK(max_eigenvalue(HermitianMatrix(d)) == doctest::Approx(-1.0));
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  CHECK(max_eigenvalue(HermitianMatrix(x)) == doctest::Approx(1.0));
  CMatrix one(1, 1);
  one(0, 0) = 3.25;
  CHECK(max_eigenvalue(HermitianMatrix(one)) == 3.25);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const CMatrix a = testutil::random_hermitian(rng, 4);
    CHECK(max_eigenvalue(HermitianMatrix(a)) == doctest::Approx(char_poly_max_root(a)).epsilon(1e-8));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianMatrix{a}, ValidationError);
}

TEST_CASE("eigendecomposition reconstructs") {
  std::mt19937_64 rng(2);
  for (int k = 1; k <= 8; ++k) {
    const CMatrix a = testutil::random_hermitian(rng, k);
    const auto eig = hermitian_eigen(a);
    const CMatrix back = eig.vectors * eig.values.cast<cdouble>().asDiagonal() * eig.vectors.adjoint();
    CHECK((a - back).norm() <= 1e-10 * a.norm());
  }
}

TEST_CASE("null space unit vector") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = -1.0;
  CVector v = null_space_unit_vector(HermitianMatrix(a), 1e-9);
  CHECK(std::abs(v(0)) == doctest::Approx(0.0));
  CHECK(v(1).real() == doctest::Approx(1.0));
  CHECK(v(1).imag() == doctest::Approx(0.0));

  CMatrix b = CMatrix::Zero(3, 3);
  b(1, 1) = -3.0;
  b(2, 2) = -5.0;
  v = null_space_unit_vector(HermitianMatrix(b), 1e-9);
  CHECK(v(0).real() == doctest::Approx(1.0));

  CMatrix two = CMatrix::Zero(3, 3);
  two(2, 2) = -1.0;
  CHECK_THROWS_AS(null_space_unit_vector(HermitianMatrix(two), 1e-9), DegeneracyError);

  std::mt19937_64 rng(5);
  const CVector u = testutil::random_cvector(rng, 3).normalized();
  const CMatrix m = -(CMatrix::Identity(3, 3) - u * u.adjoint());
  v = null_space_unit_vector(HermitianMatrix(m), 1e-9);
  CHECK((m * v).norm() <= 1e-8);
  CHECK(v.norm() == doctest::Approx(1.0));
  Eigen::Index first = 0;
  while (std::abs(v(first)) < 1e-12) ++first;
  CHECK(std::abs(v(first).imag()) <= 1e-12);
  CHECK(v(first).real() > 0.0);
}

TEST_CASE("projections") {
  std::mt19937_64 rng(6);
  const CVector y = testutil::random_cvector(rng, 4);
  const CVector par = cdouble(0.3, -2.0) * y;
  CHECK((project_onto(par, y) - par).norm() <= 1e-12 * par.norm());
  CHECK(project_orth(par, y).norm() <= 1e-12 * par.norm());

  CVector a = CVector::Zero(2), b = CVector::Zero(2);
  a(0) = 1.0;
  b(1) = 1.0;
  CHECK(project_onto(a, b).norm() == 0.0);
  CHECK((project_orth(a, b) - a).norm() == 0.0);

  for (int i = 0; i < 20; ++i) {
    const CVector x = testutil::random_cvector(rng, 4);
    const CVector z = testutil::random_cvector(rng, 4);
    const CVector p = project_onto(x, z);
    const CVector q = project_orth(x, z);
    CHECK((p + q - x).norm() <= 1e-12 * x.norm());
    CHECK(std::abs(p.dot(q)) <= 1e-12 * x.squaredNorm());
    CHECK(std::abs(x.squaredNorm() - p.squaredNorm() - q.squaredNorm()) <= 1e-10 * x.squaredNorm());
  }
  CHECK_THROWS_AS(project_onto(a, CVector::Zero(2)), ValidationError);
}

TEST_CASE("null space of a row") {
  CVector h = CVector::Zero(2);
  h(0) = 1.0;
  CMatrix v = null_space_of_row(h);
  CHECK(v.cols() == 1);
  CHECK(std::abs(v(0, 0)) <= 1e-12);
  CHECK(std::abs(v(1, 0)) == doctest::Approx(1.0));

  h(1) = 1.0;
  v = null_space_of_row(h / std::sqrt(2.0));
  CHECK(std::abs(v(0, 0) + v(1, 0)) <= 1e-12);

  std::mt19937_64 rng(7);
  const CVector r = testutil::random_cvector(rng, 4);
  v = null_space_of_row(r);
  CHECK(v.cols() == 3);
  CHECK((v.adjoint() * v - CMatrix::Identity(3, 3)).norm() <= 1e-10);
  CHECK((r.adjoint() * v).norm() <= 1e-10 * r.norm());
  CHECK_THROWS_AS(null_space_of_row(CVector::Zero(3)), ValidationError);
}

TEST_CASE("dominant right singular vector") {
  CMatrix h = CMatrix::Zero(2, 4);
  h(1, 0) = cdouble(0.0, 2.0);
  h(1, 2) = 1.0;
  const CVector v = dominant_right_singular_vector(h);
  CHECK(v.norm() == doctest::Approx(1.0));
  CVector row = h.row(1).adjoint();
  CHECK(std::abs(row.normalized().dot(v)) == doctest::Approx(1.0));
}

TEST_CASE("LMI solver: scalar") {
  LmiProgram prog(1);
  prog.cost(0) = 1.0;
  AffineHermitianMap f(2, 1);
  f.constant() = CMatrix::Identity(2, 2);
  f.coefficient(0) = -CMatrix::Identity(2, 2);
  prog.blocks.push_back(f);
  prog.lower(0) = 0.0;
  RVector x0(1);
  x0(0) = 5.0;
  const auto res = solve_lmi(prog, x0);
  CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));
  for (std::size_t i = 1; i < res.outer_trace.size(); ++i) {
    CHECK(res.outer_trace[i] <= res.outer_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("LMI solver: separable with phase one") {
  LmiProgram prog(2);
  prog.cost << 1.0, 1.0;
  AffineHermitianMap f(2, 2);
  f.constant() = CMatrix::Zero(2, 2);
  f.constant()(0, 0) = 2.0;
  f.constant()(1, 1) = 3.0;
  f.coefficient(0) = CMatrix::Zero(2, 2);
  f.coefficient(0)(0, 0) = -1.0;
  f.coefficient(1) = CMatrix::Zero(2, 2);
  f.coefficient(1)(1, 1) = -1.0;
  prog.blocks.push_back(f);
  RVector x0 = RVector::Zero(2);
  const auto res = solve_lmi(prog, x0);
  CHECK(res.x(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(res.x(1) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(res.value == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(prog.max_block_eigenvalue(res.x) <= 1e-8);
}

TEST_CASE("LMI solver: infeasible program") {
  LmiProgram prog(1);
  prog.cost(0) = 1.0;
  AffineHermitianMap f(1, 1);
  f.constant()(0, 0) = 1.0;
  f.coefficient(0)(0, 0) = 0.0;
  prog.blocks.push_back(f);
  CHECK_THROWS_AS(solve_lmi(prog, RVector::Zero(1)), InfeasibleError);
}

TEST_CASE("affine map") {
  std::mt19937_64 rng(8);
  AffineHermitianMap f(3, 2);
  f.constant() = testutil::random_hermitian(rng, 3);
  f.coefficient(0) = testutil::random_hermitian(rng, 3);
  f.coefficient(1) = testutil::random_hermitian(rng, 3);
  RVector x(2), y(2);
  x << 0.3, -1.2;
  y << 2.0, 0.7;
  const CMatrix mid = f.evaluate(0.25 * x + 0.75 * y);
  const CMatrix interp = 0.25 * f.evaluate(x) + 0.75 * f.evaluate(y);
  CHECK((mid - interp).norm() <= 1e-12 * (1.0 + mid.norm()));
}
