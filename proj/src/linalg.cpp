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

#include "coopnoma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coopnoma {

HermitianMatrix::HermitianMatrix(const CMatrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError("HermitianMatrix: matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw ValidationError("HermitianMatrix: non-finite entry");
  }
  const double asym = (a - a.adjoint()).norm();
  const double scale = std::max(1.0, a.norm());
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: ||a - a^H|| = " << asym << " exceeds " << tol * scale;
    throw ValidationError(os.str());
  }
  a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index k) {
  return HermitianMatrix(CMatrix::Zero(k, k));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index k) {
  return HermitianMatrix(CMatrix::Identity(k, k));
}

HermitianEigen hermitian_eigen(const CMatrix& input) {
  const Eigen::Index n = input.rows();
  CMatrix a = 0.5 * (input + input.adjoint());
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = a.norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        // Unitary G = diag(1, e^{-i phi}) * R(theta) zeroes a(p,q).
        const cdouble phase = a(p, q) / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cdouble g00 = c;
        const cdouble g01 = s;
        const cdouble g10 = -s * std::conj(phase);
        const cdouble g11 = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const cdouble akp = a(k, p);
          const cdouble akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cdouble apk = a(p, k);
          const cdouble aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const cdouble vkp = v(k, p);
          const cdouble vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src).real();
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

HermitianEigen hermitian_eigen(const HermitianMatrix& a) {
  return hermitian_eigen(a.matrix());
}

double max_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 1) return a.matrix()(0, 0).real();
  const auto eig = hermitian_eigen(a);
  return eig.values(eig.values.size() - 1);
}

void fix_phase(CVector& v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-14 * norm) {
      v *= std::conj(v(i)) / mag;
      v(i) = mag;
      return;
    }
  }
}

CVector null_space_unit_vector(const HermitianMatrix& a, double tol,
                               double reference_norm) {
  const Eigen::Index k = a.dim();
  const auto eig = hermitian_eigen(a);
  const double spectral = eig.values.cwiseAbs().maxCoeff();
  const double ref = reference_norm > 0.0 ? reference_norm : spectral;

  std::vector<Eigen::Index> by_magnitude(static_cast<std::size_t>(k));
  std::iota(by_magnitude.begin(), by_magnitude.end(), 0);
  std::sort(by_magnitude.begin(), by_magnitude.end(),
            [&](Eigen::Index i, Eigen::Index j) {
              return std::abs(eig.values(i)) < std::abs(eig.values(j));
            });

  const double smallest = std::abs(eig.values(by_magnitude[0]));
  const double threshold = tol * ref;
  if (smallest > threshold) {
    std::ostringstream os;
    os << "null space is empty: smallest |eigenvalue| " << smallest
       << " > " << threshold;
    throw DegeneracyError(os.str(), smallest - threshold);
  }
  if (k > 1) {
    const double second = std::abs(eig.values(by_magnitude[1]));
    if (second <= threshold) {
      std::ostringstream os;
      os << "null space has dimension > 1: second |eigenvalue| " << second
         << " <= " << threshold;
      throw DegeneracyError(os.str(), second - smallest);
    }
  }
  CVector v = eig.vectors.col(by_magnitude[0]);
  v.normalize();
  fix_phase(v);
  return v;
}

CVector project_onto(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) {
    throw ValidationError("project_onto: dimension mismatch");
  }
  const double yy = y.squaredNorm();
  if (!(yy > 0.0)) throw ValidationError("project_onto: zero direction");
  return y * (y.dot(x) / yy);
}

CVector project_orth(const CVector& x, const CVector& y) {
  return x - project_onto(x, y);
}

CMatrix null_space_of_row(const CVector& h) {
  const Eigen::Index m = h.size();
  if (m < 2) throw ValidationError("null_space_of_row: need at least 2 entries");
  if (!(h.norm() > 0.0)) throw ValidationError("null_space_of_row: zero vector");
  const CMatrix hm = h;
  Eigen::HouseholderQR<CMatrix> qr(hm);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  CMatrix basis = q.rightCols(m - 1);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    CVector col = basis.col(j);
    fix_phase(col);
    basis.col(j) = col;
  }
  return basis;
}

CVector dominant_right_singular_vector(const CMatrix& h) {
  if (h.size() == 0 || !(h.norm() > 0.0)) {
    throw ValidationError("dominant_right_singular_vector: zero matrix");
  }
  const auto eig = hermitian_eigen(CMatrix(h.adjoint() * h));
  CVector v = eig.vectors.col(eig.vectors.cols() - 1);
  v.normalize();
  fix_phase(v);
  return v;
}

}  // namespace coopnoma
