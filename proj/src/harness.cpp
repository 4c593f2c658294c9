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

#include "coopnoma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "coopnoma/alternating.hpp"
#include "coopnoma/optimal_tx.hpp"
#include "coopnoma/oracle.hpp"
#include "coopnoma/rx_filter.hpp"

namespace coopnoma {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ValidationError("not a number: '" + s + "'");
  return v;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Cell {
  double rate_r = 0.0;
  double rate_d = 0.0;
  bool outage = false;
  bool failure = false;
  bool infeasible = false;
  bool audit_bad = false;
  double ms = 0.0;
};

Cell solve_relay(const ChannelRealization& ch, const SystemParams& params, Scheme scheme) {
  Cell cell;
  try {
    const auto res = alternate(ch, params, scheme);
    const auto rep = audit(ch, res.solution, params);
    if (!rep.all_ok()) {
      cell.outage = cell.failure = cell.audit_bad = true;
      return cell;
    }
    cell.rate_r = rate_r(ch, res.solution, params);
    cell.rate_d = rate_d(ch, res.solution, params);
  } catch (const InfeasibleError&) {
    cell.outage = cell.infeasible = true;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error&) {
    cell.outage = cell.failure = true;
  }
  return cell;
}

Cell solve_direct(const ChannelRealization& ch, const SystemParams& params) {
  Cell cell;
  const double r = direct_transmission_rate(ch, params);
  if (r < params.rd_min) {
    cell.outage = true;
  } else {
    cell.rate_d = r;
  }
  return cell;
}

// cells[g * schemes + s] for one trial
std::vector<Cell> run_trial(const ExperimentConfig& cfg, bool antennas, int trial) {
  const std::size_t ns = cfg.schemes.size();
  std::vector<Cell> cells(cfg.grid.size() * ns);
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);

  ChannelRealization shared;
  if (!antennas) shared = cfg.fig2 ? fig2_channel() : sample_channel(cfg.params, cfg.path_loss, seed);

  // Feasible sets shrink as rd_min grows, so once a relay scheme is
  // infeasible at some rd_min it stays infeasible above it.
  std::vector<double> infeasible_from(ns, std::numeric_limits<double>::infinity());

  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    SystemParams params = cfg.params;
    ChannelRealization local;
    const ChannelRealization* ch = &shared;
    if (antennas) {
      params.n = static_cast<int>(std::lround(cfg.grid[g]));
      local = sample_channel(params, cfg.path_loss, seed);
      ch = &local;
    } else {
      params.rd_min = cfg.grid[g];
    }
    for (std::size_t s = 0; s < ns; ++s) {
      const auto t0 = std::chrono::steady_clock::now();
      Cell cell;
      switch (cfg.schemes[s]) {
        case SchemeKind::direct:
          cell = solve_direct(*ch, params);
          break;
        case SchemeKind::optimal:
        case SchemeKind::zf: {
          if (!antennas && params.rd_min >= infeasible_from[s]) {
            cell.outage = cell.infeasible = true;
            break;
          }
          const Scheme sc = cfg.schemes[s] == SchemeKind::optimal ? Scheme::optimal : Scheme::zf;
          cell = solve_relay(*ch, params, sc);
          if (cell.infeasible && !antennas) infeasible_from[s] = std::min(infeasible_from[s], params.rd_min);
          break;
        }
      }
      if (cfg.timing) {
        cell.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
      cells[g * ns + s] = cell;
    }
  }
  return cells;
}

SweepResult sweep(const ExperimentConfig& cfg, bool antennas) {
  cfg.validate();
  if (antennas && cfg.fig2) throw ValidationError("fig2 channel has fixed N; cannot sweep antennas");
  const auto start = std::chrono::steady_clock::now();
  const int trials = cfg.effective_trials();
  std::vector<std::vector<Cell>> per_trial(static_cast<std::size_t>(trials));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, antennas, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(trials);
        return;
      }
    }
  };
  const int nthreads = std::max(1, std::min(cfg.threads, trials));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  SweepResult result;
  const std::size_t ns = cfg.schemes.size();
  result.rows.reserve(cfg.grid.size() * ns);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    for (std::size_t s = 0; s < ns; ++s) {
      SweepRow row;
      row.sweep_value = cfg.grid[g];
      row.scheme = cfg.schemes[s];
      row.trials = trials;
      double sr = 0.0, sd = 0.0, ms = 0.0;
      int outages = 0;
      for (const auto& cells : per_trial) {
        const Cell& c = cells[g * ns + s];
        sr += c.rate_r;
        sd += c.rate_d;
        ms += c.ms;
        outages += c.outage ? 1 : 0;
        row.failures += c.failure ? 1 : 0;
        result.metadata.audit_violations += c.audit_bad ? 1 : 0;
      }
      row.mean_rate_r = sr / trials;
      row.mean_rate_d = sd / trials;
      row.outage_prob = static_cast<double>(outages) / trials;
      row.wall_ms = cfg.timing ? ms : 0.0;
      if (row.scheme != SchemeKind::direct) {
        result.metadata.total_solves += trials;
        result.metadata.total_failures += row.failures;
      }
      result.rows.push_back(row);
    }
  }
  result.metadata.seed = cfg.base_seed;
  result.metadata.config_hash = config_hash(cfg);
  result.metadata.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::rate_region:
      return "rate_region";
    case ExperimentKind::rate_vs_antennas:
      return "rate_vs_antennas";
    case ExperimentKind::outage_vs_rate:
      return "outage_vs_rate";
    case ExperimentKind::outage_vs_antennas:
      return "outage_vs_antennas";
  }
  return "unknown";
}

std::string to_string(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::optimal:
      return "optimal";
    case SchemeKind::zf:
      return "zf";
    case SchemeKind::direct:
      return "direct";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto k : {ExperimentKind::rate_region, ExperimentKind::rate_vs_antennas,
                 ExperimentKind::outage_vs_rate, ExperimentKind::outage_vs_antennas}) {
    if (text == to_string(k)) return k;
  }
  throw ValidationError("unknown experiment kind: '" + std::string(text) + "'");
}

SchemeKind parse_scheme(std::string_view text) {
  for (auto s : {SchemeKind::optimal, SchemeKind::zf, SchemeKind::direct}) {
    if (text == to_string(s)) return s;
  }
  throw ValidationError("unknown scheme: '" + std::string(text) + "'");
}

std::vector<SchemeKind> parse_schemes(std::string_view text) {
  std::vector<SchemeKind> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_scheme(item));
  }
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ValidationError("grid range must be a:b:step, got '" + t + "'");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
    if (b < a) throw ValidationError("grid end below start");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw ValidationError("grid too large");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(t, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_number(item));
  }
  return out;
}

bool sweeps_antennas(ExperimentKind kind) {
  return kind == ExperimentKind::rate_vs_antennas || kind == ExperimentKind::outage_vs_antennas;
}

void ExperimentConfig::validate() const {
  params.validate();
  path_loss.validate();
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  if (schemes.empty()) throw ValidationError("no schemes selected");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < schemes.size(); ++j) {
      if (schemes[i] == schemes[j]) throw ValidationError("duplicate scheme: " + to_string(schemes[i]));
    }
  }
  if (sweeps_antennas(kind)) {
    for (double v : grid) {
      if (!(v >= 1.0) || v != std::floor(v) || v > 64.0) {
        throw ValidationError("antenna grid values must be integers in [1, 64], got " + fmt9(v));
      }
    }
  } else {
    for (double v : grid) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("rd_min grid values must be >= 0");
    }
  }
  if (fig2 && (params.m != 2 || params.n != 4)) throw ValidationError("fig2 channel needs M=2, N=4");
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << to_string(cfg.kind) << '|' << fmt17(cfg.params.ps) << '|' << fmt17(cfg.params.sigma_d2) << '|'
     << fmt17(cfg.params.sigma_r2) << '|' << fmt17(cfg.params.sigma_r2_tilde) << '|'
     << fmt17(cfg.params.eta) << '|' << fmt17(cfg.params.rd_min) << '|' << cfg.params.m << '|'
     << cfg.params.n << '|' << fmt17(cfg.path_loss.pl_sr_db) << '|' << fmt17(cfg.path_loss.pl_sd_db)
     << '|' << fmt17(cfg.path_loss.pl_rd_db) << '|' << cfg.trials << '|' << cfg.base_seed << '|'
     << (cfg.fig2 ? 1 : 0) << '|';
  for (double v : cfg.grid) os << fmt17(v) << ',';
  os << '|';
  for (auto s : cfg.schemes) os << to_string(s) << ',';
  const std::string text = os.str();

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool SweepResult::flagged() const {
  if (metadata.total_solves == 0) return false;
  return static_cast<double>(metadata.total_failures) > kFlagFraction * metadata.total_solves;
}

SweepResult run_rate_region(const ExperimentConfig& cfg) { return sweep(cfg, false); }

SweepResult run_outage(const ExperimentConfig& cfg) { return sweep(cfg, sweeps_antennas(cfg.kind)); }

SweepResult run_rate_vs_antennas(const ExperimentConfig& cfg) { return sweep(cfg, true); }

SweepResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::rate_region:
      return run_rate_region(cfg);
    case ExperimentKind::rate_vs_antennas:
      return run_rate_vs_antennas(cfg);
    case ExperimentKind::outage_vs_rate:
    case ExperimentKind::outage_vs_antennas:
      return run_outage(cfg);
  }
  throw ValidationError("unknown experiment kind");
}

std::string format_csv(const SweepResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : result.rows) {
    out += fmt9(r.sweep_value) + ',' + to_string(r.scheme) + ',' + fmt9(r.mean_rate_r) + ',' +
           fmt9(r.mean_rate_d) + ',' + fmt9(r.outage_prob) + ',' + std::to_string(r.trials) + ',' +
           std::to_string(r.failures) + ',' + fmt9(r.wall_ms) + '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << format_csv(result);
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

std::string metadata_json(const ExperimentConfig& cfg, const SweepResult& result) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(cfg.kind);
  j["seed"] = result.metadata.seed;
  j["config_hash"] = result.metadata.config_hash;
  j["wall_ms"] = result.metadata.wall_ms;
  j["trials"] = cfg.effective_trials();
  j["threads"] = cfg.threads;
  j["fig2"] = cfg.fig2;
  j["grid"] = cfg.grid;
  std::vector<std::string> schemes;
  for (auto s : cfg.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  j["params"] = {{"ps", cfg.params.ps},
                 {"sigma_d2", cfg.params.sigma_d2},
                 {"sigma_r2", cfg.params.sigma_r2},
                 {"sigma_r2_tilde", cfg.params.sigma_r2_tilde},
                 {"eta", cfg.params.eta},
                 {"rd_min", cfg.params.rd_min},
                 {"m", cfg.params.m},
                 {"n", cfg.params.n}};
  j["path_loss_db"] = {{"sr", cfg.path_loss.pl_sr_db},
                       {"sd", cfg.path_loss.pl_sd_db},
                       {"rd", cfg.path_loss.pl_rd_db}};
  j["total_solves"] = result.metadata.total_solves;
  j["total_failures"] = result.metadata.total_failures;
  j["audit_violations"] = result.metadata.audit_violations;
  j["flagged"] = result.flagged();
  return j.dump(2) + "\n";
}

void emit_metadata(const ExperimentConfig& cfg, const SweepResult& result,
                   const std::string& csv_path) {
  const std::string path = csv_path + ".meta.json";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << metadata_json(cfg, result);
  if (!f) throw IoError("write failed: " + path);
}

std::vector<VerifyCheck> run_verify(const VerifyOptions& opts) {
  if (opts.instances < 1) throw ValidationError("verify: instances must be >= 1");
  std::vector<VerifyCheck> checks;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);

  {
    VerifyCheck c{"rho_closed_form", true, 0.0, ""};
    for (int i = 0; i < 200; ++i) {
      const double b = std::pow(10.0, logu(rng));
      const double cc = std::pow(10.0, logu(rng));
      const auto rs = rho_star(b, cc);
      const double err = std::max(std::abs(rs.rho - grid_min_rho(b, cc)),
                                  std::abs(rs.value - (b + cc + 2.0 * std::sqrt(b * cc))) /
                                      std::max(1.0, rs.value));
      c.worst = std::max(c.worst, err);
    }
    c.passed = c.worst <= 1e-6;
    c.detail = "200 random (b, c)";
    checks.push_back(c);
  }

  SystemParams params;
  PathLossSpec pl;
  const double rd_values[] = {0.5, 1.0, 2.0};
  VerifyCheck filt{"receive_filter_vs_grid", true, 0.0, ""};
  VerifyCheck opt{"optimal_vs_brute_force", true, 0.0, ""};
  VerifyCheck zf{"zf_vs_brute_force", true, 0.0, ""};
  VerifyCheck aud{"constraint_audits", true, 0.0, ""};
  int filter_cases = 0, disagreements = 0, audits = 0;
  for (int i = 0; i < opts.instances; ++i) {
    params.rd_min = rd_values[i % 3];
    const auto ch = sample_channel(params, pl, opts.seed + static_cast<std::uint64_t>(i));
    const CVector w_r = init_receiver(ch);
    const OracleOptions oo{opts.oracle_resolution, 3};
    for (int which = 0; which < 2; ++which) {
      const Scheme scheme = which == 0 ? Scheme::optimal : Scheme::zf;
      VerifyCheck& target = which == 0 ? opt : zf;
      const OracleResult orc = which == 0 ? brute_force_p2(ch, w_r, params, oo)
                                          : brute_force_zf(ch, w_r, params, oo);
      try {
        const TxSolution sol = transmit_design(ch, w_r, params, scheme);
        ++audits;
        if (!audit(ch, sol, params).all_ok()) aud.passed = false;
        const double r = rate_r(ch, sol, params);
        if (orc.feasible) {
          const double rel = std::abs(r - orc.best_rate_r) / std::max(orc.best_rate_r, 1e-12);
          target.worst = std::max(target.worst, rel);
        }
        const auto geom = FilterGeometry::from(ch, sol.w1, sol.w2);
        if (geom.h1.norm() > 0.0) {
          const auto rf = optimal_receive_filter(geom, sol.rho, params);
          const auto grid = grid_filter(geom, sol.rho, params, 1000000);
          if (grid.feasible) {
            const double v = filter_objective(geom, rf.lambda);
            filt.worst = std::max(filt.worst, std::abs(v - grid.value) / std::max(v, 1e-300));
            ++filter_cases;
          }
        }
      } catch (const InfeasibleError&) {
        if (orc.feasible) {
          ++disagreements;
          target.passed = false;
        }
      }
    }
  }
  opt.passed = opt.passed && opt.worst <= 0.02;
  zf.passed = zf.passed && zf.worst <= 0.02;
  filt.passed = filt.worst <= 1e-6;
  aud.worst = aud.passed ? 0.0 : 1.0;
  opt.detail = zf.detail = std::to_string(opts.instances) + " instances, feasibility disagreements " +
                           std::to_string(disagreements);
  filt.detail = std::to_string(filter_cases) + " geometries";
  aud.detail = std::to_string(audits) + " solutions";
  checks.push_back(filt);
  checks.push_back(opt);
  checks.push_back(zf);
  checks.push_back(aud);
  return checks;
}

}  // namespace coopnoma
