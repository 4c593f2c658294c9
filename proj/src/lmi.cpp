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

#include "coopnoma/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "coopnoma/linalg.hpp"

namespace coopnoma {

AffineHermitianMap::AffineHermitianMap(Eigen::Index dim, int num_vars)
    : dim_(dim),
      terms_(static_cast<std::size_t>(num_vars) + 1, CMatrix::Zero(dim, dim)) {}

CMatrix AffineHermitianMap::evaluate(const RVector& x) const {
  CMatrix out = terms_[0];
  for (int i = 0; i < num_vars(); ++i) {
    if (x(i) != 0.0) out += x(i) * coefficient(i);
  }
  return out;
}

LmiProgram::LmiProgram(int n)
    : num_vars(n),
      cost(RVector::Zero(n)),
      lower(RVector::Constant(n, -std::numeric_limits<double>::infinity())),
      upper(RVector::Constant(n, std::numeric_limits<double>::infinity())) {}

double LmiProgram::objective(const RVector& x) const {
  return cost.dot(x) + cost_offset;
}

double LmiProgram::max_block_eigenvalue(const RVector& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& block : blocks) {
    worst = std::max(worst, max_eigenvalue(HermitianMatrix(block.evaluate(x), 1e-9)));
  }
  return worst;
}

bool LmiProgram::strictly_feasible(const RVector& x) const {
  for (int i = 0; i < num_vars; ++i) {
    if (!(x(i) > lower(i)) || !(x(i) < upper(i))) return false;
  }
  for (const auto& block : blocks) {
    Eigen::LLT<CMatrix> llt(-block.evaluate(x));
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

void LmiProgram::validate() const {
  if (num_vars <= 0) throw ValidationError("LmiProgram: no variables");
  if (cost.size() != num_vars || lower.size() != num_vars ||
      upper.size() != num_vars) {
    throw ValidationError("LmiProgram: vector sizes disagree with num_vars");
  }
  for (int i = 0; i < num_vars; ++i) {
    if (!(lower(i) < upper(i))) {
      throw ValidationError("LmiProgram: empty bound interval");
    }
  }
  for (const auto& block : blocks) {
    if (block.num_vars() != num_vars) {
      throw ValidationError("LmiProgram: block variable count mismatch");
    }
    HermitianMatrix check(block.constant(), 1e-10);
    for (int i = 0; i < num_vars; ++i) {
      HermitianMatrix coeff(block.coefficient(i), 1e-10);
    }
  }
}

namespace {

// Real part of tr(X Y).
double trace_product(const CMatrix& x, const CMatrix& y) {
  return x.transpose().cwiseProduct(y).sum().real();
}

class Barrier {
 public:
  explicit Barrier(const LmiProgram& prog) : prog_(prog) {
    const int n = prog.num_vars;
    for (const auto& block : prog.blocks) {
      std::vector<int> active;
      for (int i = 0; i < n; ++i) {
        if (block.coefficient(i).cwiseAbs().maxCoeff() > 0.0) active.push_back(i);
      }
      active_.push_back(std::move(active));
      order_ += static_cast<double>(block.dim());
    }
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(prog.lower(i))) order_ += 1.0;
      if (std::isfinite(prog.upper(i))) order_ += 1.0;
    }
  }

  /// Barrier parameter: the duality gap of a centered point is order / weight.
  double order() const { return order_; }

  /// Returns false if x is outside the open feasible set.
  bool value(const RVector& x, double weight, double& phi) const {
    phi = weight * prog_.objective(x);
    if (!bounds_term(x, phi, nullptr, nullptr)) return false;
    for (const auto& block : prog_.blocks) {
      Eigen::LLT<CMatrix> llt(-block.evaluate(x));
      if (llt.info() != Eigen::Success) return false;
      const auto& l = llt.matrixLLT();
      for (Eigen::Index k = 0; k < l.rows(); ++k) {
        const double d = l(k, k).real();
        if (!(d > 0.0)) return false;
        phi -= 2.0 * std::log(d);
      }
    }
    return std::isfinite(phi);
  }

  bool derivatives(const RVector& x, double weight, double& phi, RVector& grad,
                   RMatrix& hess) const {
    const int n = prog_.num_vars;
    phi = weight * prog_.objective(x);
    grad = weight * prog_.cost;
    hess = RMatrix::Zero(n, n);
    if (!bounds_term(x, phi, &grad, &hess)) return false;
    std::vector<CMatrix> sinv_f(static_cast<std::size_t>(n));
    for (std::size_t b = 0; b < prog_.blocks.size(); ++b) {
      const auto& block = prog_.blocks[b];
      Eigen::LLT<CMatrix> llt(-block.evaluate(x));
      if (llt.info() != Eigen::Success) return false;
      const auto& l = llt.matrixLLT();
      for (Eigen::Index k = 0; k < l.rows(); ++k) {
        const double d = l(k, k).real();
        if (!(d > 0.0)) return false;
        phi -= 2.0 * std::log(d);
      }
      const auto& active = active_[b];
      for (int i : active) {
        sinv_f[static_cast<std::size_t>(i)] = llt.solve(block.coefficient(i));
        grad(i) += sinv_f[static_cast<std::size_t>(i)].trace().real();
      }
      for (std::size_t p = 0; p < active.size(); ++p) {
        const int i = active[p];
        for (std::size_t q = p; q < active.size(); ++q) {
          const int k = active[q];
          const double h = trace_product(sinv_f[static_cast<std::size_t>(i)],
                                         sinv_f[static_cast<std::size_t>(k)]);
          hess(i, k) += h;
          if (k != i) hess(k, i) += h;
        }
      }
    }
    return std::isfinite(phi) && grad.allFinite() && hess.allFinite();
  }

 private:
  bool bounds_term(const RVector& x, double& phi, RVector* grad,
                   RMatrix* hess) const {
    for (int i = 0; i < prog_.num_vars; ++i) {
      if (std::isfinite(prog_.lower(i))) {
        const double d = x(i) - prog_.lower(i);
        if (!(d > 0.0)) return false;
        phi -= std::log(d);
        if (grad) (*grad)(i) -= 1.0 / d;
        if (hess) (*hess)(i, i) += 1.0 / (d * d);
      }
      if (std::isfinite(prog_.upper(i))) {
        const double d = prog_.upper(i) - x(i);
        if (!(d > 0.0)) return false;
        phi -= std::log(d);
        if (grad) (*grad)(i) += 1.0 / d;
        if (hess) (*hess)(i, i) += 1.0 / (d * d);
      }
    }
    return true;
  }

  const LmiProgram& prog_;
  std::vector<std::vector<int>> active_;
  double order_ = 0.0;
};

// Solves hess * y = rhs with symmetric diagonal scaling.
RVector solve_scaled(const RMatrix& hess, const RVector& rhs) {
  const Eigen::Index n = rhs.size();
  RVector scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = hess(i, i);
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  RMatrix scaled = scale.asDiagonal() * hess * scale.asDiagonal();
  // Variables that enter no barrier term and have no cost leave a zero row.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(hess(i, i) > 0.0)) scaled(i, i) = 1.0;
  }
  Eigen::LDLT<RMatrix> ldlt(scaled);
  RVector y = ldlt.solve(scale.cwiseProduct(rhs));
  if (!y.allFinite()) {
    y = scaled.completeOrthogonalDecomposition().solve(scale.cwiseProduct(rhs));
  }
  return scale.cwiseProduct(y);
}

// Newton decrement squared below which a point counts as centered.
constexpr double kCenteredDecrement2 = 1e-10;
// Decrement squared (0.25^2) inside which full Newton steps are taken.
constexpr double kQuadraticDecrement2 = 0.0625;

struct CoreState {
  RVector x;
  double weight = 0.0;
  int newton_steps = 0;
  std::vector<double> trace;
  bool stopped_early = false;
};

using StopPredicate = std::function<bool(const RVector&)>;

// Barrier path following from a strictly feasible x.
void run_barrier(const LmiProgram& prog, CoreState& state,
                 const LmiOptions& options, const StopPredicate& stop) {
  Barrier barrier(prog);
  const double order = std::max(1.0, barrier.order());

  double phi = 0.0;
  RVector grad;
  RMatrix hess;

  if (state.weight <= 0.0) {
    // Weight minimizing the Newton decrement at the start point.
    if (!barrier.derivatives(state.x, 0.0, phi, grad, hess)) {
      throw NumericalError("solve_lmi: start point left the feasible set");
    }
    const RVector hc = solve_scaled(hess, prog.cost);
    const RVector hg = solve_scaled(hess, grad);
    const double cc = prog.cost.dot(hc);
    double w0 = (cc > 0.0 && std::isfinite(cc)) ? -prog.cost.dot(hg) / cc : 0.0;
    const double floor = order / (1.0 + std::abs(prog.objective(state.x)));
    if (!(w0 > floor) || !std::isfinite(w0)) w0 = floor;
    state.weight = w0;
  }

  for (int outer = 0; outer < options.max_outer; ++outer) {
    for (int inner = 0; inner < options.max_newton_per_outer; ++inner) {
      if (state.newton_steps >= options.max_newton_total) {
        std::vector<double> best(state.x.data(), state.x.data() + state.x.size());
        throw NonConvergenceError("solve_lmi: Newton budget exhausted", best,
                                  state.trace);
      }
      if (!barrier.derivatives(state.x, state.weight, phi, grad, hess)) {
        throw NumericalError("solve_lmi: iterate left the feasible set");
      }
      const RVector dx = solve_scaled(hess, -grad);
      const double decrement2 = -grad.dot(dx);
      ++state.newton_steps;
      if (!(decrement2 > kCenteredDecrement2) || !std::isfinite(decrement2)) break;

      double step = 1.0;
      double trial_phi = 0.0;
      RVector trial = state.x + dx;
      bool accepted = false;
      if (decrement2 < kQuadraticDecrement2) {
        // Quadratic region of a self-concordant barrier: the full step stays
        // feasible and round-off makes the sufficient-decrease test useless.
        accepted = barrier.value(trial, state.weight, trial_phi);
      }
      for (int ls = 0; !accepted && ls < 60; ++ls) {
        trial = state.x + step * dx;
        if (barrier.value(trial, state.weight, trial_phi) &&
            trial_phi <= phi - 0.25 * step * decrement2) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      state.x = trial;
      if (stop && stop(state.x)) {
        state.stopped_early = true;
        return;
      }
      if (decrement2 < kQuadraticDecrement2 * kQuadraticDecrement2 && step == 1.0) break;
    }
    const double value = prog.objective(state.x);
    state.trace.push_back(value);
    if (order / state.weight <= options.tol * (1.0 + std::abs(value))) return;
    state.weight *= options.weight_growth;
  }
  std::vector<double> best(state.x.data(), state.x.data() + state.x.size());
  throw NonConvergenceError("solve_lmi: outer iteration cap reached", best,
                            state.trace);
}

// Phase one: minimize s subject to F_j(x) - s I <= 0 and bound violations
// <= s. Stops as soon as x is strictly feasible for the original program.
RVector find_strictly_feasible(const LmiProgram& prog, const RVector& start,
                               const LmiOptions& options) {
  const int n = prog.num_vars;
  double violation = prog.max_block_eigenvalue(start);
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(prog.lower(i))) violation = std::max(violation, prog.lower(i) - start(i));
    if (std::isfinite(prog.upper(i))) violation = std::max(violation, start(i) - prog.upper(i));
  }
  const double s0 = violation + 1.0 + 0.1 * std::abs(violation);

  LmiProgram phase1(n + 1);
  phase1.cost(n) = 1.0;
  for (const auto& block : prog.blocks) {
    AffineHermitianMap lifted(block.dim(), n + 1);
    lifted.constant() = block.constant();
    for (int i = 0; i < n; ++i) lifted.coefficient(i) = block.coefficient(i);
    lifted.coefficient(n) = -CMatrix::Identity(block.dim(), block.dim());
    phase1.blocks.push_back(std::move(lifted));
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(prog.lower(i))) {
      AffineHermitianMap bound(1, n + 1);
      bound.constant()(0, 0) = prog.lower(i);
      bound.coefficient(i)(0, 0) = -1.0;
      bound.coefficient(n)(0, 0) = -1.0;
      phase1.blocks.push_back(std::move(bound));
    }
    if (std::isfinite(prog.upper(i))) {
      AffineHermitianMap bound(1, n + 1);
      bound.constant()(0, 0) = -prog.upper(i);
      bound.coefficient(i)(0, 0) = 1.0;
      bound.coefficient(n)(0, 0) = -1.0;
      phase1.blocks.push_back(std::move(bound));
    }
  }
  phase1.lower(n) = -(1.0 + std::abs(s0));

  CoreState state;
  state.x = RVector::Zero(n + 1);
  state.x.head(n) = start;
  state.x(n) = s0;
  auto stop = [&](const RVector& z) {
    return z(n) < 0.0 && prog.strictly_feasible(z.head(n));
  };
  LmiOptions relaxed = options;
  relaxed.tol = 1e-12;
  try {
    run_barrier(phase1, state, relaxed, stop);
  } catch (const NonConvergenceError&) {
    // Fall through to the verdict below.
  }
  if (state.stopped_early || prog.strictly_feasible(state.x.head(n))) {
    return state.x.head(n);
  }
  std::ostringstream os;
  os << "solve_lmi: no strictly feasible point (phase-one value " << state.x(n)
     << ")";
  throw InfeasibleError(os.str());
}

}  // namespace

LmiResult solve_lmi(const LmiProgram& prog, const RVector& start,
                    const LmiOptions& options) {
  prog.validate();
  if (start.size() != prog.num_vars) {
    throw ValidationError("solve_lmi: start has wrong dimension");
  }
  CoreState state;
  state.x = prog.strictly_feasible(start) ? start
                                          : find_strictly_feasible(prog, start, options);
  run_barrier(prog, state, options, {});

  LmiResult result;
  result.x = state.x;
  result.value = prog.objective(state.x);
  result.outer_trace = std::move(state.trace);
  result.newton_steps = state.newton_steps;
  result.gap_bound = Barrier(prog).order() / state.weight;
  return result;
}

}  // namespace coopnoma
