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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coopnoma {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, non-Hermitian matrix, zero vector where
/// a direction is required.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a closed form (e.g. b <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The optimization instance has no feasible point (the target rate of D
/// cannot be met). Sweeps count this as an outage.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted. Carries the best iterate seen.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> best,
                      std::vector<double> trace = {})
      : Error(what), best_(std::move(best)), trace_(std::move(trace)) {}

  const std::vector<double>& best_iterate() const noexcept { return best_; }
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> best_;
  std::vector<double> trace_;
};

/// A null space expected to be one-dimensional is not.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double gap)
      : Error(what), gap_(gap) {}
  /// Eigenvalue gap that failed the rank test.
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// An internal consistency check failed (e.g. a multiplier that must be
/// strictly positive came back zero).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coopnoma
