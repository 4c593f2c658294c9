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

#pragma once

#include "coopnoma/types.hpp"

namespace coopnoma {

/// Dense complex Hermitian matrix. Construction checks ||a - a^H|| against
/// tol * max(1, ||a||) (Frobenius) and stores the exactly symmetrized matrix.
class HermitianMatrix {
 public:
  static constexpr double kDefaultTol = 1e-12;

  explicit HermitianMatrix(const CMatrix& a, double tol = kDefaultTol);

  static HermitianMatrix zero(Eigen::Index k);
  static HermitianMatrix identity(Eigen::Index k);

  const CMatrix& matrix() const noexcept { return a_; }
  Eigen::Index dim() const noexcept { return a_.rows(); }

 private:
  CMatrix a_;
};

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

/// Cyclic Jacobi eigendecomposition. The input is symmetrized first, so
/// callers holding a raw CMatrix must already know it is Hermitian.
HermitianEigen hermitian_eigen(const CMatrix& a);
HermitianEigen hermitian_eigen(const HermitianMatrix& a);

double max_eigenvalue(const HermitianMatrix& a);

/// Rotates v so that its first component with magnitude above 1e-14 * ||v||
/// is real and positive.
void fix_phase(CVector& v);

/// Unit vector spanning the one-dimensional null space of `a`.
///
/// Rank test: the smallest |eigenvalue| must be <= tol * ref and the second
/// smallest > tol * ref, where ref defaults to the spectral norm of `a`.
/// Callers whose matrix is a small difference of large terms (A = P - lambda*I)
/// pass the size of those terms as `reference_norm`.
/// Throws DegeneracyError carrying the offending gap otherwise.
CVector null_space_unit_vector(const HermitianMatrix& a, double tol,
                               double reference_norm = -1.0);

/// Orthogonal projection of x onto span{y}: y (y^H y)^{-1} y^H x.
CVector project_onto(const CVector& x, const CVector& y);
/// x - project_onto(x, y).
CVector project_orth(const CVector& x, const CVector& y);

/// Orthonormal basis (M x (M-1)) of the null space of the row h^H.
CMatrix null_space_of_row(const CVector& h);

/// Dominant right singular vector of h (unit norm, phase fixed).
CVector dominant_right_singular_vector(const CMatrix& h);

}  // namespace coopnoma
