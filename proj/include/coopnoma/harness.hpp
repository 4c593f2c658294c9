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

// Monte Carlo sweeps and CSV output.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coopnoma/model.hpp"

namespace coopnoma {

class IoError : public Error {
 public:
  using Error::Error;
};

enum class ExperimentKind { rate_region, rate_vs_antennas, outage_vs_rate, outage_vs_antennas };

enum class SchemeKind { optimal, zf, direct };

std::string to_string(ExperimentKind kind);
std::string to_string(SchemeKind scheme);
ExperimentKind parse_experiment_kind(std::string_view text);
SchemeKind parse_scheme(std::string_view text);

/// Comma-separated scheme names, e.g. "optimal,zf,direct".
std::vector<SchemeKind> parse_schemes(std::string_view text);

/// Either "a:b:step" (inclusive of b up to round-off) or a comma list.
std::vector<double> parse_grid(std::string_view text);

/// True for the two antenna sweeps: the grid holds N, rd_min is fixed.
bool sweeps_antennas(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::outage_vs_rate;
  SystemParams params;
  PathLossSpec path_loss;
  std::vector<double> grid;
  int trials = 500;
  std::uint64_t base_seed = 1;
  std::vector<SchemeKind> schemes{SchemeKind::optimal, SchemeKind::zf, SchemeKind::direct};
  /// Use fig2_channel() for every trial. Only one trial is run.
  bool fig2 = false;
  int threads = 1;
  /// Record per-row solve time in wall_ms. Off by default so CSVs are
  /// byte-reproducible.
  bool timing = false;
  std::string out;

  void validate() const;
  int effective_trials() const { return fig2 ? 1 : trials; }
};

/// FNV-1a over a canonical rendering of every field that affects results.
std::string config_hash(const ExperimentConfig& cfg);

struct SweepRow {
  double sweep_value = 0.0;
  SchemeKind scheme = SchemeKind::optimal;
  double mean_rate_r = 0.0;
  double mean_rate_d = 0.0;
  double outage_prob = 0.0;
  int trials = 0;
  int failures = 0;
  double wall_ms = 0.0;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_ms = 0.0;
  int audit_violations = 0;
  int total_failures = 0;
  int total_solves = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  RunMetadata metadata;

  /// More than 10% of relay-scheme solves failed.
  bool flagged() const;
};

inline constexpr double kFlagFraction = 0.10;

/// Dispatches on cfg.kind.
SweepResult run_experiment(const ExperimentConfig& cfg);

SweepResult run_rate_region(const ExperimentConfig& cfg);
SweepResult run_outage(const ExperimentConfig& cfg);
SweepResult run_rate_vs_antennas(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "sweep_value,scheme,mean_rate_r,mean_rate_d,outage_prob,trials,failures,wall_ms";

std::string format_csv(const SweepResult& result);

/// Throws IoError naming the path.
void emit_csv(const SweepResult& result, const std::string& path);

std::string metadata_json(const ExperimentConfig& cfg, const SweepResult& result);

/// Writes metadata_json next to the CSV as `<path>.meta.json`.
void emit_metadata(const ExperimentConfig& cfg, const SweepResult& result,
                   const std::string& csv_path);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;  ///< worst observed error for the check
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  int instances = 5;
  int oracle_resolution = 40;
};

/// Quick oracle suite: closed-form rho vs grid, receive filter vs grid,
/// dual rate vs brute force, audits.
std::vector<VerifyCheck> run_verify(const VerifyOptions& opts);

}  // namespace coopnoma
