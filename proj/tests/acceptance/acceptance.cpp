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

// Acceptance checks. Usage: coopnoma_acceptance [N ...]  (default: all)
// Prints one line per criterion and exits nonzero if any selected one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coopnoma/alternating.hpp"
#include "coopnoma/harness.hpp"
#include "coopnoma/model.hpp"
#include "coopnoma/optimal_tx.hpp"
#include "coopnoma/oracle.hpp"
#include "coopnoma/rx_filter.hpp"

using namespace coopnoma;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Solutions audited across every check run in this process.
int g_audited = 0;
int g_audit_violations = 0;

bool audited(const ChannelRealization& ch, const TxSolution& sol, const SystemParams& p) {
  ++g_audited;
  const bool ok = audit(ch, sol, p, kAuditTol).all_ok();
  if (!ok) ++g_audit_violations;
  return ok;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const SweepRow* find_row(const SweepResult& r, double value, SchemeKind s) {
  for (const auto& row : r.rows) {
    if (row.scheme == s && std::abs(row.sweep_value - value) < 1e-12) return &row;
  }
  return nullptr;
}

Outcome criterion1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_rho = 0.0, worst_value = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double b = std::pow(10.0, u(rng)), c = std::pow(10.0, u(rng));
    const auto rs = rho_star(b, c);
    worst_rho = std::max(worst_rho, std::abs(rs.rho - grid_min_rho(b, c)));
    worst_value = std::max(worst_value, std::abs(rs.value - (b + c + 2.0 * std::sqrt(b * c))) / rs.value);
  }
  return {worst_rho <= 1e-6 && worst_value <= 1e-10,
          "max |drho| " + fmt("%.2e", worst_rho) + ", max rel value err " + fmt("%.2e", worst_value)};
}

Outcome criterion2() {
  SystemParams p;
  PathLossSpec pl;
  const double rds[] = {0.5, 1.0, 2.0};
  double worst = 0.0;
  int compared = 0, both_infeasible = 0, oracle_missed = 0, solver_missed = 0;
  for (int i = 0; i < 50; ++i) {
    p.rd_min = rds[i % 3];
    const auto ch = sample_channel(p, pl, 5000 + static_cast<std::uint64_t>(i));
    const CVector wr = init_receiver(ch);
    const auto orc = brute_force_p2(ch, wr, p, {40, 3});
    try {
      const auto sol = dinkelbach_optimal(ch, wr, p);
      audited(ch, sol, p);
      if (orc.feasible) {
        ++compared;
        worst = std::max(worst, std::abs(rate_r(ch, sol, p) - orc.best_rate_r) / orc.best_rate_r);
      } else {
        ++oracle_missed;
      }
    } catch (const InfeasibleError&) {
      (orc.feasible ? solver_missed : both_infeasible) += 1;
    }
  }
  return {worst <= 0.02 && solver_missed == 0,
          std::to_string(compared) + " compared, max rel gap " + fmt("%.2e", worst) + ", " +
              std::to_string(both_infeasible) + " infeasible for both, " + std::to_string(oracle_missed) +
              " feasible only for the solver, " + std::to_string(solver_missed) +
              " feasible only for the oracle"};
}

Outcome criterion3() {
  SystemParams p;
  PathLossSpec pl;
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t seed = 6000; checked < 20 && seed < 6200; ++seed) {
    p.rd_min = seed % 2 == 0 ? 1.0 : 2.0;
    const auto ch = sample_channel(p, pl, seed);
    const CVector wr = init_receiver(ch);
    const auto eff = EffectiveChannels::from(ch, wr);
    const double gamma = gamma_threshold(p);
    const double cap = std::min(gamma, 2.0 * p.ps * eff.h_sd.squaredNorm() / p.sigma_d2) * (1.0 - 1e-6);
    const double h = 1e-4 * gamma;
    const double g0 = 0.5 * cap;
    if (g0 - h < 0.0) continue;
    const double t = 1.0;
    const auto mid = solve_dual_p25(t, g0, eff, p);
    const auto lo = solve_dual_p25(t, g0 - h, eff, p);
    const auto hi = solve_dual_p25(t, g0 + h, eff, p);
    if (mid.unbounded || lo.unbounded || hi.unbounded) continue;
    const auto rec = recover_beamformers(mid, eff, p);
    const double analytic = gamma_gradient(mid, rec, eff, p);
    const double fd = (hi.d_star - lo.d_star) / (2.0 * h);
    worst = std::max(worst, std::abs(analytic - fd) / std::max(std::abs(fd), 1e-12));
    ++checked;
  }
  return {checked == 20 && worst <= 1e-3,
          std::to_string(checked) + " instances, max rel err " + fmt("%.2e", worst)};
}

Outcome criterion4() {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  auto cv = [&] {
    CVector v(4);
    for (int i = 0; i < 4; ++i) v(i) = {n01(rng), n01(rng)};
    return v;
  };
  double worst_obj = 0.0, worst_eq = 0.0;
  int geometries = 0, active = 0;
  while (geometries < 100) {
    const auto geom = FilterGeometry::from_vectors(0.3 * cv(), 0.3 * cv());
    SystemParams p;
    p.rd_min = 0.5 + 2.0 * u(rng);
    const double rho = u(rng);
    if (!filter_feasible(geom, rho, p)) continue;
    ++geometries;
    const auto f = optimal_receive_filter(geom, rho, p);
    const auto grid = grid_filter(geom, rho, p, 1000000);
    const double v = filter_objective(geom, f.lambda);
    worst_obj = std::max(worst_obj, std::abs(v - grid.value) / v);
    if (f.active) {
      ++active;
      const double k = 2.0 * rho * p.ps;
      const double n0 = rho * p.sigma_r2 + p.sigma_r2_tilde;
      const double sinr = k * std::norm(geom.h2.dot(f.w_r)) / (k * std::norm(geom.h1.dot(f.w_r)) + n0);
      const double gamma = gamma_threshold(p);
      worst_eq = std::max(worst_eq, std::abs(sinr - gamma) / gamma);
    }
  }
  return {worst_obj <= 1e-6 && worst_eq <= 1e-8,
          std::to_string(geometries) + " geometries (" + std::to_string(active) +
              " with the constraint active), max rel objective err " + fmt("%.2e", worst_obj) +
              ", max equality residual " + fmt("%.2e", worst_eq)};
}

Outcome criterion5() {
  SystemParams p;
  PathLossSpec pl;
  const double rds[] = {0.5, 1.0, 1.5};
  std::map<Scheme, int> feasible, converged, monotone_bad;
  for (auto scheme : {Scheme::optimal, Scheme::zf}) {
    for (std::uint64_t seed = 7000; feasible[scheme] < 200 && seed < 8000; ++seed) {
      p.rd_min = rds[seed % 3];
      const auto ch = sample_channel(p, pl, seed);
      try {
        const auto res = alternate(ch, p, scheme);
        ++feasible[scheme];
        audited(ch, res.solution, p);
        const auto& rec = res.trace.records;
        for (std::size_t i = 1; i < rec.size(); ++i) {
          if (rec[i].rate_r < rec[i - 1].rate_r - kMonotoneTol) {
            ++monotone_bad[scheme];
            break;
          }
        }
        if (res.trace.reason == Termination::converged) ++converged[scheme];
      } catch (const InfeasibleError&) {
      } catch (const NumericalError&) {
        ++feasible[scheme];
        ++monotone_bad[scheme];
      }
    }
  }
  bool pass = true;
  std::string detail;
  for (auto scheme : {Scheme::optimal, Scheme::zf}) {
    const double frac = static_cast<double>(converged[scheme]) / std::max(1, feasible[scheme]);
    pass = pass && feasible[scheme] == 200 && monotone_bad[scheme] == 0 && frac >= 0.95;
    detail += to_string(scheme) + ": " + std::to_string(feasible[scheme]) + " instances, " +
              std::to_string(monotone_bad[scheme]) + " non-monotone, converged " + fmt("%.1f%%", 100.0 * frac) +
              "; ";
  }
  return {pass, detail};
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Outcome criterion6() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::rate_region;
  cfg.fig2 = true;
  cfg.grid = parse_grid("0:5:0.25");
  cfg.schemes = {SchemeKind::optimal, SchemeKind::zf};
  const auto r = run_rate_region(cfg);
  g_audited += r.metadata.total_solves;
  g_audit_violations += r.metadata.audit_violations;

  bool dominance = true, monotone = true;
  double onset_opt = -1.0, onset_zf = -1.0;
  double prev_opt = 1e300, prev_zf = 1e300;
  for (double v : cfg.grid) {
    const auto* o = find_row(r, v, SchemeKind::optimal);
    const auto* z = find_row(r, v, SchemeKind::zf);
    if (o->mean_rate_r < z->mean_rate_r - 1e-6) dominance = false;
    if (o->mean_rate_r > prev_opt + 1e-9 || z->mean_rate_r > prev_zf + 1e-9) monotone = false;
    prev_opt = o->mean_rate_r;
    prev_zf = z->mean_rate_r;
    if (onset_opt < 0.0 && o->outage_prob == 1.0) onset_opt = v;
    if (onset_zf < 0.0 && z->outage_prob == 1.0) onset_zf = v;
  }
  const bool found = onset_opt >= 0.0 && onset_zf >= 0.0;
  const bool close = found && std::abs(onset_opt - onset_zf) <= 0.25 + 1e-12;

  // region grows with source power
  auto cfg36 = cfg;
  cfg36.params.ps = db_to_linear(36.0);
  const auto r36 = run_rate_region(cfg36);
  bool enlarged = true;
  for (double v : cfg.grid) {
    if (find_row(r36, v, SchemeKind::optimal)->mean_rate_r < find_row(r, v, SchemeKind::optimal)->mean_rate_r - 1e-9)
      enlarged = false;
  }

  // golden comparison: same layout, values within 1e-6 relative
  std::ifstream gf(COOPNOMA_GOLDEN_DIR "/fig2_rate_region.csv", std::ios::binary);
  std::ostringstream gs;
  gs << gf.rdbuf();
  const auto golden = read_csv(gs.str());
  const auto fresh = read_csv(format_csv(r));
  bool golden_ok = gf.good() && golden.size() == fresh.size();
  for (std::size_t i = 1; golden_ok && i < fresh.size(); ++i) {
    if (golden[i].size() != 8 || golden[i][1] != fresh[i][1]) {
      golden_ok = false;
      break;
    }
    for (int c : {0, 2, 3, 4}) {
      const double a = std::stod(golden[i][static_cast<std::size_t>(c)]);
      const double b = std::stod(fresh[i][static_cast<std::size_t>(c)]);
      if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(a))) golden_ok = false;
    }
  }
  const bool byte_equal = gs.str() == format_csv(r);

  return {dominance && monotone && close && enlarged && golden_ok,
          std::string("optimal >= zf: ") + (dominance ? "yes" : "no") +
              ", nonincreasing: " + (monotone ? "yes" : "no") + ", infeasible from " +
              fmt("%.2f", onset_opt) + " (optimal) and " + fmt("%.2f", onset_zf) +
              " (zf), 36 dB enlarges region: " + (enlarged ? "yes" : "no") + ", golden: " +
              (golden_ok ? (byte_equal ? "match (bytes)" : "match (1e-6)") : "MISMATCH")};
}

Outcome criterion7() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::outage_vs_rate;
  cfg.trials = 500;
  cfg.grid = parse_grid("0:4:0.25");
  cfg.params.ps = db_to_linear(30.0);
  const auto r = run_outage(cfg);
  g_audited += r.metadata.total_solves;
  g_audit_violations += r.metadata.audit_violations;

  std::string violations;
  double worst_gap = 0.0;
  bool dominance = true, monotone = true;
  double prev_o = -1.0;
  for (double v : cfg.grid) {
    const double o = find_row(r, v, SchemeKind::optimal)->outage_prob;
    const double z = find_row(r, v, SchemeKind::zf)->outage_prob;
    const double d = find_row(r, v, SchemeKind::direct)->outage_prob;
    worst_gap = std::max(worst_gap, std::abs(o - z));
    if (d > 0.05 && o > d) {
      dominance = false;
      violations += " " + fmt("%.2f", v) + "(" + fmt("%.3f", o) + ">" + fmt("%.3f", d) + ")";
    }
    if (o < prev_o) monotone = false;
    prev_o = o;
  }
  return {dominance && worst_gap <= 0.03 && monotone && r.metadata.total_failures == 0,
          std::string("max |optimal - zf| ") + fmt("%.3f", worst_gap) + ", optimal nondecreasing in rd_min: " +
              (monotone ? "yes" : "no") + ", solver failures " + std::to_string(r.metadata.total_failures) +
              ", optimal above direct at:" + (violations.empty() ? " none" : violations)};
}

Outcome criterion8() {
  const std::vector<double> ns{1, 2, 4, 8};
  ExperimentConfig rate;
  rate.kind = ExperimentKind::rate_vs_antennas;
  rate.trials = 200;
  rate.grid = ns;
  rate.params.rd_min = 2.0;
  rate.schemes = {SchemeKind::optimal, SchemeKind::zf};
  const auto rr = run_rate_vs_antennas(rate);

  ExperimentConfig out = rate;
  out.kind = ExperimentKind::outage_vs_antennas;
  out.params.rd_min = 3.0;
  const auto ro = run_outage(out);
  for (const auto* r : {&rr, &ro}) {
    g_audited += r->metadata.total_solves;
    g_audit_violations += r->metadata.audit_violations;
  }

  bool pass = true;
  std::string detail;
  for (auto s : {SchemeKind::optimal, SchemeKind::zf}) {
    std::vector<double> mean, outage;
    for (double n : ns) {
      mean.push_back(find_row(rr, n, s)->mean_rate_r);
      outage.push_back(find_row(ro, n, s)->outage_prob);
    }
    std::vector<double> cond;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double served = 1.0 - find_row(rr, ns[i], s)->outage_prob;
      cond.push_back(served > 0.0 ? mean[i] / served : 0.0);
    }
    bool nondecreasing = true, shrinking = true, outage_ok = true;
    double prev_slope = 1e300;
    for (std::size_t i = 1; i < ns.size(); ++i) {
      if (mean[i] < mean[i - 1]) nondecreasing = false;
      const double slope = (mean[i] - mean[i - 1]) / (ns[i] - ns[i - 1]);
      if (slope > prev_slope) shrinking = false;
      prev_slope = slope;
      if (outage[i] > outage[i - 1]) outage_ok = false;
    }
    pass = pass && nondecreasing && shrinking && outage_ok;
    detail += to_string(s) + " R_R";
    for (double m : mean) detail += " " + fmt("%.3f", m);
    detail += " outage";
    for (double o : outage) detail += " " + fmt("%.3f", o);
    detail += " (R_R over served trials";
    for (double c : cond) detail += " " + fmt("%.3f", c);
    detail += ")";
    detail += std::string(nondecreasing && shrinking ? "" : " [rate trend broken]") +
              (outage_ok ? "" : " [outage trend broken]") + "; ";
  }
  return {pass, detail};
}

Outcome criterion9() {
  // Broad sweep on top of whatever the other checks in this process audited.
  SystemParams p;
  PathLossSpec pl;
  int before = g_audit_violations;
  for (std::uint64_t seed = 9000; seed < 9100; ++seed) {
    const auto ch = sample_channel(p, pl, seed);
    const CVector wr = init_receiver(ch);
    for (double rd : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      p.rd_min = rd;
      for (auto scheme : {Scheme::optimal, Scheme::zf}) {
        try {
          audited(ch, transmit_design(ch, wr, p, scheme), p);
          audited(ch, alternate(ch, p, scheme).solution, p);
        } catch (const InfeasibleError&) {
        }
      }
    }
  }
  const auto f2 = fig2_channel();
  for (double rd = 0.0; rd <= 3.5; rd += 0.25) {
    p.rd_min = rd;
    for (auto scheme : {Scheme::optimal, Scheme::zf}) {
      try {
        audited(f2, alternate(f2, p, scheme).solution, p);
      } catch (const InfeasibleError&) {
      }
    }
  }
  (void)before;
  return {g_audit_violations == 0,
          std::to_string(g_audited) + " solutions audited at tol 1e-6, " + std::to_string(g_audit_violations) +
              " violations"};
}

Outcome criterion10() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::outage_vs_rate;
  cfg.trials = 30;
  cfg.grid = parse_grid("0:3:0.5");
  cfg.base_seed = 99;
  const std::string a = "acceptance_determinism_a.csv", b = "acceptance_determinism_b.csv",
                    c = "acceptance_determinism_c.csv";
  emit_csv(run_experiment(cfg), a);
  emit_csv(run_experiment(cfg), b);
  auto threaded = cfg;
  threaded.threads = 3;
  emit_csv(run_experiment(threaded), c);
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  };
  const std::string sa = slurp(a), sb = slurp(b), sc = slurp(c);
  ExperimentConfig f2;
  f2.kind = ExperimentKind::rate_region;
  f2.fig2 = true;
  f2.grid = parse_grid("0:3.5:0.5");
  f2.schemes = {SchemeKind::optimal, SchemeKind::zf};
  const bool fig2_same = format_csv(run_experiment(f2)) == format_csv(run_experiment(f2));
  std::remove(a.c_str());
  std::remove(b.c_str());
  std::remove(c.c_str());
  const bool same = !sa.empty() && sa == sb && sa == sc;
  return {same && fig2_same, std::string("rerun identical: ") + (sa == sb ? "yes" : "no") +
                                 ", 3 threads identical: " + (sa == sc ? "yes" : "no") +
                                 ", example-channel sweep identical: " + (fig2_same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  }
  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.1f s) %s\n", n, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
