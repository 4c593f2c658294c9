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

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coopnoma/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFlagged = 2;
constexpr int kExitIo = 3;

struct Options {
  std::uint64_t seed = 1;
  int trials = 500;
  double ps_db = 30.0;
  std::optional<std::string> rdmin_grid;
  std::optional<std::string> antenna_grid;
  std::optional<double> rdmin;
  std::optional<std::string> schemes;
  std::string out;
  bool fig2 = false;
  int threads = 1;
  bool timing = false;
  int m = 2;
  int n = 4;
  double eta = 0.8;
  double pl_sr = 10.0;
  double pl_sd = 30.0;
  double pl_rd = 25.0;
  int instances = 5;
};

coopnoma::ExperimentConfig build_config(coopnoma::ExperimentKind kind, const Options& o) {
  using namespace coopnoma;
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.params.ps = db_to_linear(o.ps_db);
  cfg.params.eta = o.eta;
  cfg.params.m = o.m;
  cfg.params.n = o.n;
  cfg.path_loss = {o.pl_sr, o.pl_sd, o.pl_rd};
  cfg.trials = o.trials;
  cfg.base_seed = o.seed;
  cfg.fig2 = o.fig2;
  cfg.threads = o.threads;
  cfg.timing = o.timing;
  cfg.out = o.out;

  const bool antennas = sweeps_antennas(kind);
  if (antennas) {
    cfg.grid = parse_grid(o.antenna_grid.value_or("1,2,4,8"));
    cfg.params.rd_min = o.rdmin.value_or(kind == ExperimentKind::rate_vs_antennas ? 2.0 : 3.0);
  } else {
    cfg.grid = parse_grid(o.rdmin_grid.value_or("0:4:0.25"));
  }
  const bool outage = kind == ExperimentKind::outage_vs_rate || kind == ExperimentKind::outage_vs_antennas;
  cfg.schemes = parse_schemes(o.schemes.value_or(outage ? "optimal,zf,direct" : "optimal,zf"));
  cfg.validate();
  return cfg;
}

int run(coopnoma::ExperimentKind kind, const Options& o) {
  using namespace coopnoma;
  ExperimentConfig cfg;
  try {
    cfg = build_config(kind, o);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  SweepResult result;
  try {
    result = run_experiment(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    if (cfg.out.empty()) {
      std::cout << format_csv(result);
    } else {
      emit_csv(result, cfg.out);
      emit_metadata(cfg, result, cfg.out);
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cerr << "solves " << result.metadata.total_solves << ", failures "
            << result.metadata.total_failures << ", audit violations "
            << result.metadata.audit_violations << ", config " << result.metadata.config_hash
            << "\n";
  if (result.flagged()) {
    std::cerr << "run flagged: more than 10% of solves failed\n";
    return kExitFlagged;
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  coopnoma::VerifyOptions vo;
  vo.seed = o.seed;
  vo.instances = o.instances;
  bool all = true;
  try {
    for (const auto& c : coopnoma::run_verify(vo)) {
      std::printf("%-26s %s  worst=%.3e  (%s)\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                  c.worst, c.detail.c_str());
      all = all && c.passed;
    }
  } catch (const coopnoma::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return all ? kExitOk : kExitFlagged;
}

}  // namespace

int main(int argc, char** argv) {
  using coopnoma::ExperimentKind;
  CLI::App app{"Transceiver design sweeps for a wireless-powered cooperative NOMA relay"};
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--seed", o.seed, "Base seed; trial i uses seed + i");
  app.add_option("--trials", o.trials, "Channel realizations per grid point");
  app.add_option("--ps-db", o.ps_db, "Source power in dB");
  app.add_option("--rdmin-grid", o.rdmin_grid, "rd_min grid, a:b:step or a comma list");
  app.add_option("--antenna-grid", o.antenna_grid, "N grid for the antenna sweeps");
  app.add_option("--rdmin", o.rdmin, "Fixed rd_min for the antenna sweeps");
  app.add_option("--schemes", o.schemes, "Comma list from optimal,zf,direct");
  app.add_option("--out", o.out, "CSV path; stdout when omitted");
  app.add_flag("--fig2", o.fig2, "Use the fixed example channel (one trial)");
  app.add_option("--threads", o.threads, "Worker threads");
  app.add_flag("--timing", o.timing, "Fill wall_ms (makes the CSV non-reproducible)");
  app.add_option("--m", o.m, "Antennas at S");
  app.add_option("--n", o.n, "Antennas at R");
  app.add_option("--eta", o.eta, "Energy harvesting efficiency");
  app.add_option("--pl-sr", o.pl_sr, "Path loss S-R in dB");
  app.add_option("--pl-sd", o.pl_sd, "Path loss S-D in dB");
  app.add_option("--pl-rd", o.pl_rd, "Path loss R-D in dB");

  auto* rr = app.add_subcommand("rate-region", "Mean (R_D, R_R) versus rd_min");
  auto* ra = app.add_subcommand("rate-antennas", "Mean R_R versus N");
  auto* orate = app.add_subcommand("outage-rate", "Outage of D versus rd_min");
  auto* oant = app.add_subcommand("outage-antennas", "Outage of D versus N");
  auto* ver = app.add_subcommand("verify", "Run the oracle suite");
  ver->add_option("--instances", o.instances, "Random instances for the brute-force checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (rr->parsed()) return run(ExperimentKind::rate_region, o);
  if (ra->parsed()) return run(ExperimentKind::rate_vs_antennas, o);
  if (orate->parsed()) return run(ExperimentKind::outage_vs_rate, o);
  if (oant->parsed()) return run(ExperimentKind::outage_vs_antennas, o);
  if (ver->parsed()) return run_verify(o);
  return kExitConfig;
}
